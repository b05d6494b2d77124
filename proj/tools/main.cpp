#include "cli.hpp"

int main(int argc, char** argv) { return stumpscope::run_cli(argc, argv); }
