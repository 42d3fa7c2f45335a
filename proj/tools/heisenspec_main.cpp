#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include <heisenspec/cli.hpp>

int main(int argc, char** argv) {
    // The dense eigensolvers thread through BLAS; honor an explicit cap.
    if (const char* th = std::getenv("HEISENSPEC_THREADS")) {
        setenv("OPENBLAS_NUM_THREADS", th, 0);
        setenv("OMP_NUM_THREADS", th, 0);
    }
    std::vector<std::string> args(argv + 1, argv + argc);
    heisenspec::cli::cli_result r = heisenspec::cli::run(args);
    std::fputs(r.doc.c_str(), stdout);
    if (!r.doc.empty() && r.doc.back() != '\n') std::fputc('\n', stdout);
    return r.exit_code;
}
