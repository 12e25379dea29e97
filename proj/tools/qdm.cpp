// qdm: quantum D-module computations for smooth Fano toric varieties.

#include "qdm/commands.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <regex>

namespace {

std::pair<long, long> parse_modes(const std::string& text) {
    static const std::regex range(R"(^\s*(\d+)\s*(?:\.\.\s*(\d+))?\s*$)");
    std::smatch mt;
    if (!std::regex_match(text, mt, range)) throw qdm::Error("--modes expects N0..N1");
    const long lo = std::stol(mt[1]);
    const long hi = mt[2].matched ? std::stol(mt[2]) : lo;
    return {lo, hi};
}

qdm::IntVec parse_degree(const std::string& text) {
    qdm::IntVec d;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            d.push_back(std::stol(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw qdm::Error("--degree expects comma-separated integers, got '" + text + "'");
        }
    }
    return d;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Givental series, annihilating operators and loop-space data of smooth toric varieties"};
    qdm::cli::RunConfig cfg;
    std::string modes, format = "json";
    std::vector<std::string> degrees;

    app.add_option("command", cfg.command, "cohomology | ifunction | operators | loop-model")
        ->required()
        ->check(CLI::IsMember(qdm::cli::commands()));
    app.add_option("fan", cfg.fan_path, "fan JSON file")->required();
    app.add_option("--max-degree", cfg.max_degree, "truncation bound B on the c_1-degree")->check(CLI::NonNegativeNumber);
    app.add_option("--theta-order", cfg.theta_order, "ansatz theta order (default: dim + 1)")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--q-degree", cfg.q_degree, "ansatz total q degree")->check(CLI::NonNegativeNumber);
    app.add_option("--hbar-order", cfg.hbar_order, "ansatz hbar degree (default: theta order)")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--modes", modes, "loop model mode range N0..N1 (default N(d)..N(d)+3)");
    app.add_option("--degree", degrees, "curve class d1,d2,... (repeatable)");
    app.add_flag("--allow-general-sign", cfg.allow_general_sign, "accept degrees outside the Fano regime");
    app.add_flag("--components", cfg.components, "ifunction: also print all basis components");
    app.add_option("--format", format, "json | text")->check(CLI::IsMember({"json", "text"}));
    app.add_option("--out", cfg.out_path, "write the report here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (!modes.empty()) cfg.modes = parse_modes(modes);
        for (const auto& d : degrees) cfg.degrees.push_back(parse_degree(d));
        cfg.format = format == "text" ? qdm::cli::Format::text : qdm::cli::Format::json;
        const qdm::cli::Report rep = qdm::cli::run(cfg);
        const std::string text = qdm::cli::render(rep, cfg.format);
        if (cfg.out_path.empty()) {
            std::cout << text;
        } else {
            std::ofstream out(cfg.out_path, std::ios::binary);
            if (!out) throw qdm::Error("cannot write '" + cfg.out_path + "'");
            out << text;
        }
        if (!rep.ok) std::cerr << "qdm: verification failed\n";
        return rep.ok ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "qdm: error: " << e.what() << "\n";
        return 2;
    }
}
