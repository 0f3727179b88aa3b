// Copyright Contributors to the voxup project
// SPDX-License-Identifier: Apache-2.0

#include <voxup/cli.h>

#include <iostream>

int
main(int argc, char **argv) {
    return voxup::runCli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
