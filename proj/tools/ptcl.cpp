#include "ptcl/cli.hpp"

int main(int argc, char** argv) { return ptcl::run_cli(argc, argv); }
