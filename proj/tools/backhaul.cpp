#include "backhaul/cli.hpp"

int main(int argc, char **argv) { return backhaul::cli::run(argc, argv); }
