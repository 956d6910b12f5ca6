#include "subact/cli.hpp"

int main(int argc, char** argv) { return subact::cli_main(argc, argv); }
