#include "ueslab/app.hpp"

int main(int argc, char** argv) { return ueslab::cli_main(argc, argv); }
