#include "cli.hpp"

int main(int argc, char** argv) { return graphimpute::cli::main(argc, argv); }
