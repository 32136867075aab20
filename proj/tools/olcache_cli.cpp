#include "olcache/cli.hpp"

int main(int argc, char** argv) { return olcache::cli_main(argc, argv); }
