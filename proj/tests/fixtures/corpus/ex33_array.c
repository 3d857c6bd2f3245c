#include <stdio.h>

int main(void) {
    int buf[4];
    for (int i = 0; i < 4; i++) buf[i] = i;
    printf("%d\n", buf[3]);
    return 0;
}
