#include "hyperpf/cli.hpp"

int main(int argc, char** argv) { return hyperpf::cli::main_entry(argc, argv); }
