#include "blx/cli.hpp"

int main(int argc, char** argv) { return blx::cli_main(argc, argv); }
