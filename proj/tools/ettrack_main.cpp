#include "ettrack/cli/commands.hpp"

int main(int argc, char** argv) { return ettrack::cli::dispatch(argc, argv); }
