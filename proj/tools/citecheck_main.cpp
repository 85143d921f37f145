#include "citecheck/cli.hpp"

int main(int argc, char** argv) { return citecheck::cli::main_entry(argc, argv); }
