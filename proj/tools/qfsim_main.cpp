#include "qfs/cli.hpp"

int main(int argc, char** argv) { return qfs::run_cli(argc, argv); }
