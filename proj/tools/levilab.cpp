#include "levilab/cli.hpp"

int main(int argc, char** argv) { return levilab::cli::main_entry(argc, argv); }
