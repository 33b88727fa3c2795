#include "hbeta/cli.hpp"

int main(int argc, char** argv) {
    return hbeta::cli::dispatch(argc, argv);
}
