#include "mfglp/io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace mfglp {

namespace {

using nlohmann::json;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open for writing: " + path.string());
    return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open for reading: " + path.string());
    return in;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    return fields;
}

struct CsvReader {
    std::ifstream in;
    std::string path;
    int line_no = 0;

    explicit CsvReader(const std::filesystem::path& p) : in(open_in(p)), path(p.string()) {}

    bool next(std::vector<std::string>& fields) {
        std::string line;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty() || line[0] == '#') continue;
            char c = line[0];
            if (!std::isdigit(static_cast<unsigned char>(c)) && c != '-' && c != '+')
                continue;  // header row
            fields = split_csv_line(line);
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw ConfigError(path + ":" + std::to_string(line_no) + ": " + what);
    }

    double to_double(const std::string& s) const {
        try {
            return std::stod(s);
        } catch (...) {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": bad number '" + s + "'");
        }
    }

    int to_int(const std::string& s) const {
        try {
            return std::stoi(s);
        } catch (...) {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": bad index '" + s + "'");
        }
    }
};

void write_indexed(std::ofstream& out, const GridSpec& grid, int x) {
    auto mi = grid.multi_index(x);
    out << mi[0];
    if (grid.state_dim == 2) out << "," << mi[1];
}

}  // namespace

void write_flow_csv(const std::filesystem::path& path, const GridSpec& grid,
                    const MeanFieldFlow& flow) {
    auto out = open_out(path);
    out << (grid.state_dim == 2 ? "node,i0,i1,mass\n" : "node,i0,mass\n");
    for (int k = 0; k < flow.num_nodes(); ++k)
        for (int x = 0; x < grid.num_states(); ++x) {
            out << k << ",";
            write_indexed(out, grid, x);
            out << "," << fmt(flow.m(k, x)) << "\n";
        }
}

MeanFieldFlow read_flow_csv(const std::filesystem::path& path, const GridSpec& grid) {
    CsvReader reader(path);
    MeanFieldFlow flow;
    flow.m = Matrix::Zero(grid.n_time + 1, grid.num_states());
    std::vector<std::string> f;
    const std::size_t want = grid.state_dim == 2 ? 4 : 3;
    while (reader.next(f)) {
        if (f.size() != want) reader.fail("expected " + std::to_string(want) + " fields");
        int k = reader.to_int(f[0]);
        int i0 = reader.to_int(f[1]);
        int i1 = grid.state_dim == 2 ? reader.to_int(f[2]) : 0;
        if (k < 0 || k > grid.n_time || i0 < 0 || i0 >= grid.n_state[0] ||
            (grid.state_dim == 2 && (i1 < 0 || i1 >= grid.n_state[1])))
            reader.fail("index out of range");
        flow.m(k, grid.flat_index(i0, i1)) = reader.to_double(f.back());
    }
    return flow;
}

void write_occupation_csv(const std::filesystem::path& path, const GridSpec& grid,
                          const OccupationMeasure& occ) {
    auto out = open_out(path);
    out << (grid.state_dim == 2 ? "slab,i0,i1,a,mass\n" : "slab,i0,a,mass\n");
    for (int k = 0; k < grid.n_time; ++k)
        for (int x = 0; x < grid.num_states(); ++x)
            for (int a = 0; a < grid.num_actions(); ++a) {
                out << k << ",";
                write_indexed(out, grid, x);
                out << "," << a << "," << fmt(occ.xi[k](x, a)) << "\n";
            }
    // terminal measure rows: slab = n_time, a = -1
    for (int x = 0; x < grid.num_states(); ++x) {
        out << grid.n_time << ",";
        write_indexed(out, grid, x);
        out << ",-1," << fmt(occ.nu[x]) << "\n";
    }
}

OccupationMeasure read_occupation_csv(const std::filesystem::path& path, const GridSpec& grid) {
    CsvReader reader(path);
    OccupationMeasure occ;
    occ.xi.assign(grid.n_time, Matrix::Zero(grid.num_states(), grid.num_actions()));
    occ.nu = Vector::Zero(grid.num_states());
    std::vector<std::string> f;
    const std::size_t want = grid.state_dim == 2 ? 5 : 4;
    while (reader.next(f)) {
        if (f.size() != want) reader.fail("expected " + std::to_string(want) + " fields");
        int k = reader.to_int(f[0]);
        int i0 = reader.to_int(f[1]);
        int i1 = grid.state_dim == 2 ? reader.to_int(f[2]) : 0;
        int a = reader.to_int(f[want - 2]);
        double mass = reader.to_double(f.back());
        if (i0 < 0 || i0 >= grid.n_state[0] ||
            (grid.state_dim == 2 && (i1 < 0 || i1 >= grid.n_state[1])))
            reader.fail("state index out of range");
        int x = grid.flat_index(i0, i1);
        if (k == grid.n_time && a == -1) {
            occ.nu[x] = mass;
        } else if (k >= 0 && k < grid.n_time && a >= 0 && a < grid.num_actions()) {
            occ.xi[k](x, a) = mass;
        } else {
            reader.fail("slab/action index out of range");
        }
    }
    return occ;
}

void write_psi_csv(const std::filesystem::path& path, const GridSpec& grid,
                   const DualCertificate& psi) {
    auto out = open_out(path);
    out << (grid.state_dim == 2 ? "node,i0,i1,value\n" : "node,i0,value\n");
    for (int k = 0; k <= grid.n_time; ++k)
        for (int x = 0; x < grid.num_states(); ++x) {
            out << k << ",";
            write_indexed(out, grid, x);
            out << "," << fmt(psi.psi(k, x)) << "\n";
        }
}

DualCertificate read_psi_csv(const std::filesystem::path& path, const GridSpec& grid) {
    CsvReader reader(path);
    DualCertificate psi;
    psi.psi = Matrix::Zero(grid.n_time + 1, grid.num_states());
    std::vector<std::string> f;
    const std::size_t want = grid.state_dim == 2 ? 4 : 3;
    while (reader.next(f)) {
        if (f.size() != want) reader.fail("expected " + std::to_string(want) + " fields");
        int k = reader.to_int(f[0]);
        int i0 = reader.to_int(f[1]);
        int i1 = grid.state_dim == 2 ? reader.to_int(f[2]) : 0;
        if (k < 0 || k > grid.n_time || i0 < 0 || i0 >= grid.n_state[0] ||
            (grid.state_dim == 2 && (i1 < 0 || i1 >= grid.n_state[1])))
            reader.fail("index out of range");
        psi.psi(k, grid.flat_index(i0, i1)) = reader.to_double(f.back());
    }
    return psi;
}

void write_value_csv(const std::filesystem::path& path, const GridSpec& grid,
                     const Matrix& values_by_node) {
    auto out = open_out(path);
    out << (grid.state_dim == 2 ? "node,i0,i1,value\n" : "node,i0,value\n");
    for (Eigen::Index k = 0; k < values_by_node.rows(); ++k)
        for (int x = 0; x < grid.num_states(); ++x) {
            out << k << ",";
            write_indexed(out, grid, x);
            out << "," << fmt(values_by_node(k, x)) << "\n";
        }
}

void write_policy_csv(const std::filesystem::path& path, const GridSpec& grid,
                      const Policy& policy) {
    auto out = open_out(path);
    out << (grid.state_dim == 2 ? "slab,i0,i1,a,prob\n" : "slab,i0,a,prob\n");
    for (int k = 0; k < grid.n_time; ++k)
        for (int x = 0; x < grid.num_states(); ++x)
            for (int a = 0; a < grid.num_actions(); ++a) {
                out << k << ",";
                write_indexed(out, grid, x);
                out << "," << a << "," << fmt(policy.kernel[k](x, a)) << "\n";
            }
}

std::string residual_report_json(const ResidualReport& report) {
    json j;
    j["r_value"] = report.r_value;
    j["r_flow"] = report.r_flow;
    j["r_terminal_feas"] = report.r_terminal_feas;
    j["r_bellman_feas"] = report.r_bellman_feas;
    j["r_consistency"] = report.r_consistency;
    j["r_comp_terminal"] = report.r_comp_terminal;
    j["r_comp_running"] = report.r_comp_running;
    j["comp_terminal_signed"] = report.comp_terminal_signed;
    j["comp_running_signed"] = report.comp_running_signed;
    j["verdict"] = report.verdict;
    j["tolerance"] = report.tolerance;
    return j.dump(2);
}

}  // namespace mfglp
