// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "hedtts/service/cli.hpp"

int main(int argc, char** argv) { return hedtts::service::run_cli(argc, argv, std::cout, std::cerr); }
