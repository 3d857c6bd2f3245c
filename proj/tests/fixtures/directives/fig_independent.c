int compute(int a, int b, int c) {
    int x;
    x =
#ifdef WINDOWS
    a+b;  /* expression
to be repaired */
#else /* LINUX */
    c;
#endif
    return x;
}
