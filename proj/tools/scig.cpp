#include "cli.hpp"

int main(int argc, char** argv) { return scig::cli::run_cli(argc, argv); }
