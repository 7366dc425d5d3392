#include <cpd/cli/cli.hpp>

int main(int argc, char** argv) {
    return cpd::cli::run(argc, argv);
}
