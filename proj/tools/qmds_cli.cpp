// Command-line interface; subcommands are registered in cli_impl.hpp.
#include "qmds/cli_impl.hpp"

int main(int argc, char** argv) { return qmds::cli_main(argc, argv); }
