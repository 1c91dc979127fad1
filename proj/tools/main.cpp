#include "dnssquat/cli.hpp"

int main(int argc, char** argv) { return dnssquat::cli::run(argc, argv); }
