#include <stdio.h>

struct counter {
    int hits;
};

static void bump(struct counter *c) {
    c->hits++;
}

int main(int argc, char **argv) {
    struct counter ctr = {0};
    (void)argv;
    bump(argc > 1 ? 0 : &ctr);
    if (ctr.hits == 0) return 7;
    printf("hits=%d\n", ctr.hits);
    return 0;
}
