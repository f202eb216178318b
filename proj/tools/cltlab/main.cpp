#include "cltlab/cli.hpp"

int main(int argc, char** argv) { return cltlab::cli::main(argc, argv); }
