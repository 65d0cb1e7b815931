// Copyright 2026 The InquiryLab Authors
// SPDX-License-Identifier: Apache-2.0
//
// inquirylab: serve | simulate | report | export | import | fixture generate
//
// Exit codes: 0 success, 1 usage error, 2 environment error (unopenable
// database or file, port in use), 3 invalid input data.

#include <atomic>
#include <chrono>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>
#include <httplib.h>
#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "inquirylab/analytics/report.h"
#include "inquirylab/fixture/generator.h"
#include "inquirylab/protocol/calibration.h"
#include "inquirylab/protocol/host_session.h"
#include "inquirylab/service/api.h"
#include "inquirylab/sim/device_farm.h"

namespace {

using namespace inquirylab;

constexpr int kExitEnvironment = 2;
constexpr int kExitBadInput = 3;

// Raised by subcommands to exit with a specific code.
struct Exit {
  int code;
  std::string message;
};

std::atomic<bool> g_stop{false};
httplib::Server* g_server = nullptr;

void OnSignal(int) {
  g_stop = true;
  if (g_server) g_server->stop();
}

std::vector<core::EventRecord> ReadLogFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Exit{kExitEnvironment, "cannot open " + path};
  try {
    return core::ReadEventLog(in);
  } catch (const core::LogFormatError& e) {
    throw Exit{kExitBadInput, path + ": " + e.what()};
  }
}

scoring::Rubric LoadRubric(const std::string& path) {
  try {
    return scoring::Rubric::FromFile(path);
  } catch (const std::exception& e) {
    throw Exit{kExitEnvironment, e.what()};
  }
}

// --- serve -----------------------------------------------------------------

struct ServeArgs {
  std::string listen = "127.0.0.1:8080";
  std::string db = "inquirylab.db";
  std::string photos = "photos";
  std::string cues = scoring::DefaultCuePath();
  bool fixture = false;
  std::string fixture_dir = fixture::DefaultCorpusDir();
  std::string fixture_password;
  int kit_size = 1;
  std::uint64_t seed = 1;
  double time_scale = 1.0;
};

int Serve(const ServeArgs& a) {
  const proto::Endpoint listen = proto::Endpoint::Parse(a.listen);
  sim::DeviceFarm farm;
  if (a.kit_size > 0) farm = sim::SpawnClassKit({a.kit_size, a.seed, a.time_scale, listen.host});

  service::ServiceConfig cfg;
  cfg.db_path = a.db;
  cfg.photo_dir = a.photos;
  cfg.cue_path = a.cues;
  std::unique_ptr<service::Service> svc;
  try {
    svc = std::make_unique<service::Service>(cfg, farm.List());
  } catch (const service::StoreError& e) {
    throw Exit{kExitEnvironment, e.what()};
  } catch (const std::filesystem::filesystem_error& e) {
    throw Exit{kExitEnvironment, e.what()};
  }
  if (a.fixture) {
    if (svc->store().EventCount() == 0) {
      svc->Import(ReadLogFile(a.fixture_dir + "/events.ndjson"));
      spdlog::info("loaded fixture corpus: {} events", svc->store().EventCount());
    } else {
      spdlog::info("database already has events; fixture not loaded");
    }
  }
  if (!a.fixture_password.empty()) svc->SetMissingPasswords(a.fixture_password);

  httplib::Server server;
  svc->Mount(server);
  server.set_logger([](const httplib::Request& req, const httplib::Response& res) {
    spdlog::info("{} {} {}", req.method, req.path, res.status);
  });
  const int port = listen.port == 0 ? server.bind_to_any_port(listen.host) : (server.bind_to_port(listen.host, listen.port) ? listen.port : -1);
  if (port < 0) throw Exit{kExitEnvironment, "cannot listen on " + a.listen};
  g_server = &server;
  std::signal(SIGINT, OnSignal);
  std::signal(SIGTERM, OnSignal);
  std::cout << "listening on http://" << listen.host << ":" << port << " (" << farm.size() << " devices)"
            << std::endl;
  server.listen_after_bind();
  g_server = nullptr;
  svc.reset();
  farm.StopAll();
  return 0;
}

// --- simulate --------------------------------------------------------------

struct SimulateArgs {
  int kit_size = sim::kDefaultKitSizePerType;
  std::uint64_t seed = 1;
  double time_scale = 1.0;
  bool probe = false;
  std::string fault;
  double duration = 0;  // seconds; 0 runs until interrupted
};

int Simulate(const SimulateArgs& a) {
  std::optional<sim::Fault> fault;
  if (!a.fault.empty()) {
    fault = sim::FaultFromName(a.fault);
    if (!fault) throw Exit{1, "unknown fault '" + a.fault + "' (mute, corrupt-crc, slow)"};
  }
  sim::DeviceFarm farm = sim::SpawnClassKit({a.kit_size, a.seed, a.time_scale, "127.0.0.1"});
  for (const sim::FarmDeviceInfo& d : farm.List()) {
    if (fault) farm.InjectFault(d.id, *fault);
    std::cout << d.id << ' ' << proto::SensorName(d.sensor_type) << ' ' << d.endpoint.ToString();
    if (a.probe) {
      try {
        proto::HostSession s(proto::TcpStream::Connect(d.endpoint, std::chrono::seconds(1)));
        const proto::SensorDescriptor desc = s.Handshake();
        s.Start();
        const proto::StreamEvent ev = s.Next(std::chrono::seconds(2));
        std::cout << " channels=" << desc.channels.size();
        if (ev.kind == proto::StreamEvent::Kind::kMeasurement) {
          std::cout << " first=";
          for (std::size_t i = 0; i < ev.data.measurement.values.size(); ++i) {
            proto::Centi v = ev.data.measurement.values[i];
            if (desc.calibration) v = proto::ApplyCalibrationUnchecked(v, *desc.calibration);
            std::cout << (i ? "," : "") << fmt::format("{:.2f}", v.ToDouble());
          }
        } else {
          std::cout << (ev.kind == proto::StreamEvent::Kind::kTimeout ? " first=timeout" : " first=error");
        }
        s.Stop();
      } catch (const std::exception& e) {
        std::cout << " probe-failed=\"" << e.what() << '"';
      }
    }
    std::cout << '\n';
  }
  std::cout.flush();
  std::signal(SIGINT, OnSignal);
  std::signal(SIGTERM, OnSignal);
  const auto until = std::chrono::steady_clock::now() + std::chrono::duration<double>(a.duration);
  while (!g_stop && (a.duration <= 0 || std::chrono::steady_clock::now() < until)) {
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
  farm.StopAll();
  return 0;
}

// --- report / export / import ------------------------------------------------

int Report(const std::string& log_path, const std::string& format, const std::string& cues,
           std::uint64_t class_id) {
  const auto log = ReadLogFile(log_path);
  const scoring::Rubric rubric = LoadRubric(cues);
  analytics::EngagementReport r;
  try {
    if (class_id == 0) {
      r = analytics::ReportFromLog(log, rubric);
    } else {
      const analytics::EngagementReport whole = analytics::ReportFromLog(log, rubric);
      (void)whole;  // validates ordering and every record before scoping
      r = analytics::ComputeReport(core::Platform::Replay(log), rubric, {.class_id = core::ClassId{class_id}});
    }
  } catch (const analytics::IngestError& e) {
    throw Exit{kExitBadInput, log_path + ": " + e.what()};
  }
  if (format == "json") {
    std::cout << analytics::ToJson(r).dump(2) << '\n';
  } else {
    std::cout << analytics::RenderTable(r);
  }
  return 0;
}

std::unique_ptr<service::Store> OpenStore(const std::string& path) {
  try {
    return std::make_unique<service::Store>(path);
  } catch (const service::StoreError& e) {
    throw Exit{kExitEnvironment, e.what()};
  }
}

int Export(const std::string& db, const std::string& out) {
  const auto store = OpenStore(db);
  const auto events = store->LoadEvents();
  if (out.empty() || out == "-") {
    core::WriteEventLog(std::cout, events);
  } else {
    std::ofstream f(out, std::ios::binary);
    if (!f) throw Exit{kExitEnvironment, "cannot write " + out};
    core::WriteEventLog(f, events);
  }
  std::cerr << "exported " << events.size() << " events\n";
  return 0;
}

int Import(const std::string& db, const std::string& log_path) {
  const auto log = ReadLogFile(log_path);
  try {
    core::Platform::Replay(log);
  } catch (const core::DomainError& e) {
    throw Exit{kExitBadInput, log_path + ": " + e.what()};
  }
  const auto store = OpenStore(db);
  try {
    store->PersistAll(log);
  } catch (const service::StoreError& e) {
    throw Exit{kExitEnvironment, e.what()};
  }
  std::cerr << "imported " << log.size() << " events into " << db << '\n';
  return 0;
}

int GenerateFixture(const std::string& out, std::uint64_t seed, const std::string& cues) {
  fixture::CorpusPlan plan;
  plan.seed = seed;
  const fixture::Corpus corpus = fixture::GenerateCorpus(plan, LoadRubric(cues));
  fixture::WriteCorpus(corpus, out);
  std::cerr << "wrote " << corpus.events.size() << " events and " << corpus.labels.size() << " labels to " << out
            << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"InquiryLab: classroom sensor inquiries"};
  app.require_subcommand(1);

  ServeArgs serve;
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
  serve_cmd->add_option("--listen", serve.listen, "host:port")->capture_default_str();
  serve_cmd->add_option("--db", serve.db, "SQLite database path")->capture_default_str();
  serve_cmd->add_option("--photos", serve.photos, "Photo blob directory")->capture_default_str();
  serve_cmd->add_option("--cues", serve.cues, "Rubric cue file");
  serve_cmd->add_flag("--fixture", serve.fixture, "Load the bundled corpus into an empty database");
  serve_cmd->add_option("--fixture-dir", serve.fixture_dir, "Corpus directory");
  serve_cmd->add_option("--fixture-password", serve.fixture_password,
                        "Password for imported accounts that have none");
  serve_cmd->add_option("--kit-size", serve.kit_size, "Virtual devices per sensor type (0 for none)")
      ->capture_default_str()
      ->check(CLI::Range(0, 100));
  serve_cmd->add_option("--seed", serve.seed, "Device seed");
  serve_cmd->add_option("--time-scale", serve.time_scale, "Simulated seconds per wall second")
      ->check(CLI::PositiveNumber);

  SimulateArgs simulate;
  auto* sim_cmd = app.add_subcommand("simulate", "Spawn a virtual class kit and print its endpoints");
  sim_cmd->add_option("--kit-size", simulate.kit_size, "Devices per sensor type")
      ->capture_default_str()
      ->check(CLI::Range(1, 100));
  sim_cmd->add_option("--seed", simulate.seed, "Signal seed")->capture_default_str();
  sim_cmd->add_option("--time-scale", simulate.time_scale)->check(CLI::PositiveNumber);
  sim_cmd->add_flag("--probe", simulate.probe, "Handshake each device and print its first measurement");
  sim_cmd->add_option("--fault", simulate.fault, "Inject a fault into every device: mute, corrupt-crc, slow");
  sim_cmd->add_option("--duration", simulate.duration, "Seconds to keep running (0: until interrupted)")
      ->check(CLI::NonNegativeNumber);

  std::string log_path, format = "table", cues = scoring::DefaultCuePath();
  std::uint64_t class_id = 0;
  auto* report_cmd = app.add_subcommand("report", "Print the engagement report for an event log");
  report_cmd->add_option("log", log_path, "NDJSON event log")->required();
  report_cmd->add_option("--format", format)->check(CLI::IsMember({"table", "json"}))->capture_default_str();
  report_cmd->add_option("--class-id", class_id, "Restrict to one class");
  report_cmd->add_option("--cues", cues, "Rubric cue file");

  std::string db = "inquirylab.db", out;
  auto* export_cmd = app.add_subcommand("export", "Write a database's event log as NDJSON");
  export_cmd->add_option("--db", db)->capture_default_str();
  export_cmd->add_option("--out,-o", out, "Output file (default stdout)");

  std::string import_log;
  auto* import_cmd = app.add_subcommand("import", "Load an NDJSON event log into an empty database");
  import_cmd->add_option("log", import_log)->required();
  import_cmd->add_option("--db", db)->capture_default_str();

  std::string fixture_out = fixture::DefaultCorpusDir();
  std::uint64_t fixture_seed = fixture::CorpusPlan{}.seed;
  auto* fixture_cmd = app.add_subcommand("fixture", "Bundled corpus tools");
  fixture_cmd->require_subcommand(1);
  auto* generate_cmd = fixture_cmd->add_subcommand("generate", "Regenerate the corpus files");
  generate_cmd->add_option("--out", fixture_out)->capture_default_str();
  generate_cmd->add_option("--seed", fixture_seed)->capture_default_str();
  generate_cmd->add_option("--cues", cues);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*serve_cmd) return Serve(serve);
    if (*sim_cmd) return Simulate(simulate);
    if (*report_cmd) return Report(log_path, format, cues, class_id);
    if (*export_cmd) return Export(db, out);
    if (*import_cmd) return Import(db, import_log);
    if (*generate_cmd) return GenerateFixture(fixture_out, fixture_seed, cues);
  } catch (const Exit& e) {
    std::cerr << "error: " << e.message << '\n';
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
