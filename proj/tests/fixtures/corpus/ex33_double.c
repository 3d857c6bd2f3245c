#include <stdio.h>

static double ratio(int flag) {
    double d;
    if (flag) d = 0.5;
    return d;
}

int main(void) {
    printf("%.1f\n", ratio(1));
    return 0;
}
