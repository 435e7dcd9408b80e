#include "simo/cli.hpp"

int main(int argc, char** argv) { return simo::run_cli(argc, argv); }
