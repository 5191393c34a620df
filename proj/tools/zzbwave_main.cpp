#include "zzbwave/cli.hpp"

int main(int argc, char** argv) { return zzbwave::run_cli(argc, argv); }
