#include "meanfix_cli/commands.hpp"

int main(int argc, char **argv) { return meanfix::cli::run(argc, argv); }
