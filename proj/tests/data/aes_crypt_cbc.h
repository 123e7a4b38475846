typedef struct {
  int nr;                     /*  number of rounds  */
  unsigned long *rk;          /*  AES round keys    */
  unsigned long buf[68];      /*  unaligned data    */
} aes_context;

/*@ requires ctx_valid: \valid(ctx);
  @ requires ctx_init: \initialized(ctx->buf + (0 .. 63));
  @ requires ctx_rk: ctx->rk == ctx->buf;
  @ requires ctx_nr: ctx->nr == 14;
  @ requires mode: mode == 0 || mode == 1;
  @ requires length: 16 <= length <= 16672;
  @ requires length_mod: length % 16 == 0;
  @ requires iv_valid: \valid(iv + (0 .. 15));
  @ requires iv_init: \initialized(iv + (0 .. 15));
  @ requires input_valid: \valid_read(input + (0 .. length - 1));
  @ requires input_init: \initialized(input + (0 .. length - 1));
  @ requires output_valid: \valid(output + (0 .. length - 1)); */
int aes_crypt_cbc(aes_context *ctx,int mode,size_t length,unsigned char iv[16],
                  const unsigned char *input,unsigned char *output);
