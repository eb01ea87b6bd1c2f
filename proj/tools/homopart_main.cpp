#include "homopart/cli.hpp"

int main(int argc, char** argv) { return homopart::run(argc, argv); }
