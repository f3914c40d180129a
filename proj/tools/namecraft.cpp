#include "namecraft/cli.hpp"

int main(int argc, char** argv) { return namecraft::dispatch(argc, argv); }
