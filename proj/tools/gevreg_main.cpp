// placeholder so the target builds before the CLI lands
int main() { return 0; }
