// SPDX-License-Identifier: Apache-2.0
#include "tnlab/cli.hpp"

int main(int argc, char** argv) { return tnlab::cli::run(argc, argv); }
