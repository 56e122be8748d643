#include "marl_lob/cli.hpp"

int main(int argc, char** argv) { return marl_lob::cli::main(argc, argv); }
