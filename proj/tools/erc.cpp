#include "erc/cli.hpp"

int main(int argc, char** argv) { return erc::cli::run(argc, argv); }
