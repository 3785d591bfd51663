#include "gwlion/cli.hpp"

int main(int argc, char** argv) { return gwlion::run_cli(argc, argv); }
