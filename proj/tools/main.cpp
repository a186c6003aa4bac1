#include "sces/harness.hpp"

int main(int argc, char** argv) { return sces::cli_main(argc, argv); }
