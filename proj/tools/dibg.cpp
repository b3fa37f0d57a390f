#include <unistd.h>

#include <CLI11.hpp>
#include <csignal>
#include <filesystem>
#include <iostream>
#include <thread>

#include "dibg/cli.hpp"
#include "dibg/service.hpp"

namespace {

dibg::service::WebSocketServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Relational debugger for WLANG programs"};
  app.require_subcommand(1);

  std::string script;
  auto* run = app.add_subcommand("run", "Run a command script");
  run->add_option("script", script, "Script file")->required();

  auto* repl = app.add_subcommand("repl", "Interactive command loop");

  std::uint16_t port = dibg::service::kDefaultPort;
  std::string host = "127.0.0.1";
  bool stdio = false;
  std::string root;
  auto* serve = app.add_subcommand("serve", "Serve one session over WebSocket (/session)");
  serve->add_option("--port", port, "TCP port")->capture_default_str();
  serve->add_option("--host", host, "Listen address")->capture_default_str();
  serve->add_flag("--stdio", stdio, "Newline-delimited JSON on stdin/stdout instead of WebSocket");
  serve->add_option("--root", root, "Directory for relative paths in session.save/open and cex.import");

  std::string program;
  std::vector<std::int64_t> args;
  bool print_trace = false;
  auto* exec = app.add_subcommand("exec", "Run one program and print its result");
  exec->add_option("program", program, "WLANG source file")->required();
  exec->add_option("--args", args, "Inputs for main")->allow_extra_args();
  exec->add_flag("--print-trace", print_trace, "Print every execution point");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (*run) return dibg::cli::run_script(script, std::cout, std::cerr);

  if (*repl) {
    dibg::cli::run_repl(std::cin, std::cout, std::filesystem::current_path(), isatty(STDIN_FILENO));
    return 0;
  }

  if (*exec) return dibg::cli::exec_program(program, args, print_trace, std::cout, std::cerr);

  dibg::service::Dispatcher dispatcher(root.empty() ? std::filesystem::current_path() : std::filesystem::path(root));
  if (stdio) {
    dibg::service::serve_stdio(dispatcher, std::cin, std::cout);
    return 0;
  }
  try {
    dibg::service::WebSocketServer server(dispatcher, host, port);
    g_server = &server;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::cerr << "listening on ws://" << host << ":" << server.port() << "/session" << std::endl;
    server.run();
    g_server = nullptr;
  } catch (const dibg::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
