#include "edgelab/cli.hpp"

int main(int argc, char** argv) { return edgelab::cli::main_entry(argc, argv); }
