#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
  try {
    const uwsn::cli::RunRequest request = uwsn::cli::parse_args(argc, argv);
    return uwsn::cli::execute(request, std::cout, std::cerr);
  } catch (const uwsn::cli::CliError& e) {
    (e.exit_code() == 0 ? std::cout : std::cerr) << e.what() << '\n';
    return e.exit_code();
  }
}
