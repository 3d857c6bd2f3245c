#include <stdio.h>

int main(void) {
    char c = *"hi";
    printf("%c\n", c);
    return 0;
}
