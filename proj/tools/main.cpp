// Copyright 2026 The gsexplore Authors
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return gsx::cli::run(argc, argv, std::cout, std::cerr); }
