#include "pbgsim/cli.hpp"

int main(int argc, char** argv) { return pbgsim::run_cli(argc, argv); }
