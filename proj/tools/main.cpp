#include "jsinfer/cli.hpp"

int main(int argc, char** argv) { return jsinfer::run_cli(argc, argv); }
