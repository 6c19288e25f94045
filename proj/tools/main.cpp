#include "safesynth/cli.hpp"

int main(int argc, char** argv) { return safesynth::run_cli(argc, argv); }
