#include "cli.hpp"

int main(int argc, char** argv) { return perception::cli::run(argc, argv); }
