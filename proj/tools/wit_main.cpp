#include "wit/cli/commands.hpp"

int main(int argc, char** argv) { return wit::cli::run(argc, argv); }
