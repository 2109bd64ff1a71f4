#include "svlab/cli.hpp"

int main(int argc, char** argv) { return svlab::cli::main_entry(argc, argv); }
