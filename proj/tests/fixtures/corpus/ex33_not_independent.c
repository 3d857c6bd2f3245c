#include <stdio.h>

static int tally(int flag) {
    int
#ifdef WIDE
    long
#endif
    count;
    if (flag) count = 2;
    return (int)count;
}

int main(void) {
    printf("%d\n", tally(1));
    return 0;
}
