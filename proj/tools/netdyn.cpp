#include "cli.hpp"

int main(int argc, char** argv) { return netdyn::cli::run(argc, argv); }
