#include <stdio.h>

static int printed = 0;

static void walk(const char **names) {
    const char *name;
    while ((name = *names++)) {
        printed++;
        puts(name);
    }
}

int main(int argc, char **argv) {
    const char *list[] = {"alpha", "beta", 0};
    (void)argv;
    walk(argc > 1 ? 0 : list);
    if (printed == 0) return 5;
    return 0;
}
