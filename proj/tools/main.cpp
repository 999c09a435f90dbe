#include "hsx/cli.hpp"

int main(int argc, char** argv) { return hsx::cli::main_entry(argc, argv); }
