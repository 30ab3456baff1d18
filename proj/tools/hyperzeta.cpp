#include <iostream>

#include "hyperzeta/cli.hpp"

int main(int argc, char** argv) {
  hyperzeta::JobConfig job;
  int status = 0;
  if (!hyperzeta::parse_input(argc, argv, job, status, std::cerr)) return status;
  return hyperzeta::run(job, std::cout, std::cerr);
}
