#include "cli.hpp"

int main(int argc, char** argv) { return fcount::cli::run(argc, argv); }
