// Exit-code and file-output checks against the actual CLI binary, driven
// through std::system. The binary path comes in via NUQWALK_CLI_PATH.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

int failures = 0;

int run(const std::string& args) {
    const std::string cmd = std::string(NUQWALK_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    if (rc == -1) return -1;
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

void expect(const std::string& what, bool ok) {
    std::printf("%s  %s\n", ok ? "ok  " : "FAIL", what.c_str());
    if (!ok) ++failures;
}

} // namespace

int main() {
    const fs::path tmp = fs::temp_directory_path() / "nuqwalk_cli_tests";
    fs::remove_all(tmp);
    fs::create_directories(tmp);

    expect("help exits 0", run("--help") == 0);
    expect("missing subcommand exits 2", run("") == 2);
    expect("unknown flag exits 2", run("evolve --frobnicate") == 2);
    expect("unknown preset exits 2", run("evolve --preset fig9") == 2);
    expect("missing config file exits 2", run("evolve --config /nonexistent.json") == 2);
    expect("preset plus config together exit 2",
           run("evolve --preset fig1 --config /nonexistent.json") == 2);

    expect("default certify grid passes, exit 0",
           run("certify --out " + (tmp / "cert").string()) == 0);
    expect("certify with steps 9 exits 2 (size cap)",
           run("certify --steps 9 --out " + (tmp / "cert9").string()) == 2);

    const fs::path dens = tmp / "dens";
    expect("density run exits 0",
           run("density --preset fig1 --gamma-exp 1.3 --sym minus --out " + dens.string()) == 0);
    expect("density grid file exists", fs::exists(dens / "density_g1.3_symminus_t25.csv"));
    expect("density manifest exists", fs::exists(dens / "manifest.json"));

    // A bad config payload (not just a missing file).
    const fs::path badcfg = tmp / "bad.json";
    {
        FILE* f = std::fopen(badcfg.string().c_str(), "w");
        std::fputs("{\"sym\": \"sideways\"}", f);
        std::fclose(f);
    }
    expect("invalid sym in config exits 2", run("evolve --config " + badcfg.string()) == 2);

    std::printf("%s\n", failures == 0 ? "ALL OK" : "FAILURES");
    return failures == 0 ? 0 : 1;
}
