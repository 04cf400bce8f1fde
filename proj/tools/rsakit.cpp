// rsakit -- command-line front end
#include <csignal>
#include <iostream>

#include "rsakit/cli.hpp"

namespace {

rsakit::CancelToken g_cancel;

extern "C" void on_interrupt(int) { g_cancel.request(); }

}  // namespace

int main(int argc, char** argv) {
    std::signal(SIGINT, on_interrupt);
    std::vector<std::string> args(argv + 1, argv + argc);
    return rsakit::run_cli(args, std::cout, std::cerr, &g_cancel);
}
