#include <stdio.h>

static int copy_value(int *dst, int *src) {
    if (!dst) return -1;
    *dst = *src;
    return 0;
}

int main(int argc, char **argv) {
    int out = 0, in = 23;
    (void)argv;
    if (copy_value(&out, argc > 1 ? 0 : &in) == -1) return 3;
    printf("%d\n", out);
    return 0;
}
