#include "donq/cli.hpp"

int main(int argc, char** argv) { return donq::cli_main(argc, argv); }
