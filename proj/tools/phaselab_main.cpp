#include "ivs/phaselab.hpp"

int main(int argc, char** argv) { return ivs::phaselab::cli(argc, argv); }
