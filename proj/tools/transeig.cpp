#include "transeig/cli.hpp"

int main(int argc, char** argv) { return transeig::cli::main_entry(argc, argv); }
