#include "cli.hpp"

int main(int argc, char** argv)
{
    return edclust::cli::cli_main(argc, argv);
}
