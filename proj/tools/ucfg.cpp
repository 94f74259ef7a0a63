#include "ucfg/cli.hpp"

int main(int argc, char** argv) { return ucfg::cli::run(argc, argv); }
