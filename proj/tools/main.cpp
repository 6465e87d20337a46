#include "fermicert/cli.hpp"

int main(int argc, char** argv) { return fermicert::run_cli(argc, argv); }
