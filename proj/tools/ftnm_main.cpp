#include "ftnm/cli.hpp"

int main(int argc, char** argv) { return ftnm::run_cli(argc, argv); }
