#include <stdio.h>

static void store(int *slot, int v) {
    *slot = v;
}

int main(int argc, char **argv) {
    int cell = -1;
    (void)argv;
    store(argc > 1 ? 0 : &cell, 12);
    if (cell == -1) return 6;
    printf("%d\n", cell);
    return 0;
}
