#include "tfelab/cli.hpp"

int main(int argc, char** argv) { return tfelab::run_cli(argc, argv); }
