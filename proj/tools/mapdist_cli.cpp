#include "mapdist/benchmark_runner.hpp"

int main(int argc, char** argv) { return mapdist::run_cli(argc, argv); }
