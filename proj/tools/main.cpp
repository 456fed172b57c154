#include "config.hpp"
#include "run.hpp"

#include "momentbounds/errors.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    using namespace momentbounds;
    try {
        cli::RunConfig config;
        std::string help;
        if (!cli::parse_args(argc, argv, config, help)) {
            std::cout << help;
            return 0;
        }
        return cli::run(config, std::cout, std::cerr);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
