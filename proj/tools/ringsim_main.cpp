// ringsim: exact simulation, verification and compilation of modal circuits
// over cyclic and Galois rings.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "ringsim/compile.hpp"

using namespace ringsim;

namespace {

constexpr const char* kReportHeader = "# ringsim-report v1";

// 0 success, 1 decision-negative, 2 usage error, 3 verification failure
constexpr int kExitNegative = 1;
constexpr int kExitUsage = 2;
constexpr int kExitVerification = 3;

StateSpace parse_space(const std::string& s) {
    if (s == "generic") return StateSpace::generic;
    if (s == "l1") return StateSpace::l1;
    if (s == "l2") return StateSpace::l2;
    fail(errc::bad_argument, "space must be generic, l1 or l2");
}

Circuit load_circuit(const std::string& path) {
    std::ifstream f(path);
    if (!f) fail(errc::bad_argument, "cannot open '" + path + "'");
    return read_circuit(f);
}

int cmd_run(const std::string& circuit_file, const std::string& input, bool show_state,
            const std::string& space_name) {
    Circuit c = load_circuit(circuit_file);
    if (static_cast<int>(input.size()) != c.input_width)
        fail(errc::bad_argument, "input has " + std::to_string(input.size()) +
                                     " bits, circuit expects " + std::to_string(c.input_width));
    StateSpace space = space_name.empty() ? default_space(c) : parse_space(space_name);
    ModalState out = run(c, input);
    Decision d = Decision::NotNecessary;
    if (is_necessary(out, {c.output_wire}, "1", space))
        d = Decision::One;
    else if (is_necessary(out, {c.output_wire}, "0", space))
        d = Decision::Zero;
    std::cout << kReportHeader << '\n';
    std::cout << "decision: " << to_string(d) << '\n';
    if (show_state) {
        std::cout << "final state:\n";
        write_state(std::cout, out);
    }
    return d == Decision::One ? 0 : kExitNegative;
}

int cmd_verify_gate(const std::string& gate_file, const std::string& require) {
    std::ifstream f(gate_file);
    if (!f) fail(errc::bad_argument, "cannot open '" + gate_file + "'");
    Gate g = read_gate(f);
    GateClassification cls = g.classification();
    auto yn = [](bool b) { return b ? "yes" : "no"; };
    std::cout << kReportHeader << '\n';
    std::cout << "arity: " << g.in_bits() << '\n';
    std::cout << "invertible: " << yn(cls.invertible) << '\n';
    std::cout << "affine: " << yn(cls.affine) << '\n';
    std::cout << "unitary: " << yn(cls.unitary) << '\n';
    if (cls.s2_threshold) std::cout << "s2_threshold: " << *cls.s2_threshold << '\n';
    if (!require.empty()) {
        bool ok = require == "unitary"      ? cls.unitary
                  : require == "affine"     ? cls.affine
                  : require == "invertible" ? cls.invertible
                                            : (fail(errc::bad_argument,
                                                    "--require takes unitary|affine|invertible"),
                                               false);
        std::cout << "required " << require << ": " << (ok ? "pass" : "fail") << '\n';
        if (!ok) return kExitVerification;
    }
    return 0;
}

int cmd_k_gate(i64 k, const std::string& out_file) {
    RingSpec ring = RingSpec::make_cyclic(k);
    Gate g = branching_gate_K(ring);
    auto [a, b, c, d] = four_squares(k - 1);
    RingMatrix check = g.matrix().transpose().mul(g.matrix());
    bool ok = check.is_identity();
    std::cout << kReportHeader << '\n';
    std::cout << "k: " << k << '\n';
    std::cout << "four-squares: " << a << ' ' << b << ' ' << c << ' ' << d << '\n';
    std::cout << "KT*K == I (mod " << k << "): " << (ok ? "pass" : "fail") << '\n';
    if (out_file.empty()) {
        write_gate(std::cout, g);
    } else {
        std::ofstream f(out_file);
        if (!f) fail(errc::bad_argument, "cannot open '" + out_file + "'");
        write_gate(f, g);
        std::cout << "wrote: " << out_file << '\n';
    }
    return ok ? 0 : kExitVerification;
}

ReversiblePredicate load_predicate(const std::string& cnf_file, const std::string& pred_file) {
    if (cnf_file.empty() == pred_file.empty())
        fail(errc::bad_argument, "give exactly one of --cnf and --predicate");
    if (!cnf_file.empty()) {
        std::ifstream f(cnf_file);
        if (!f) fail(errc::bad_argument, "cannot open '" + cnf_file + "'");
        return formula_to_reversible(read_dimacs(f));
    }
    std::ifstream f(pred_file);
    if (!f) fail(errc::bad_argument, "cannot open '" + pred_file + "'");
    return read_predicate(f);
}

int cmd_compile(const std::string& mode, const std::string& cnf_file,
                const std::string& pred_file, const std::string& circuit_file, i64 k,
                const std::string& out_file, bool lower, int max_arity) {
    Circuit compiled;
    std::cout << kReportHeader << '\n';
    if (mode == "uncompute") {
        if (circuit_file.empty()) fail(errc::bad_argument, "--mode uncompute needs --circuit");
        compiled = uncompute_wrap(load_circuit(circuit_file));
        std::cout << "mode: uncompute\n";
        std::cout << "width: " << compiled.final_width() << '\n';
    } else if (mode == "affine" || mode == "unitary") {
        ReversiblePredicate rp = load_predicate(cnf_file, pred_file);
        RingSpec ring = RingSpec::make_cyclic(k);
        std::cout << "mode: " << mode << '\n';
        std::cout << "registers: n=" << rp.n << " B=" << rp.B << " m=" << rp.m << '\n';
        if (mode == "affine") {
            compiled = build_affine_modkp(rp, ring);
            AffineLayout lay{rp.n, rp.B, rp.m};
            std::cout << "layout: X=1.." << rp.n << " (b,s) pairs to " << 2 * rp.B
                      << " wires, W to wire " << lay.width() << '\n';
            std::cout << "width before erasure: " << lay.width() << '\n';
        } else {
            compiled = build_unitary_modkp(rp, ring);
            UnitaryLayout lay{rp.n, rp.B, rp.m};
            std::cout << "layout: X=1.." << rp.n << " B=" << lay.b_wire(1) << ".."
                      << lay.b_wire(rp.B) << " S=" << lay.s_wire(1) << ".." << lay.s_wire(2 * rp.B)
                      << " W=" << lay.w_wire(1) << ".." << lay.w_wire(rp.m - 1)
                      << " a'=" << lay.a_prime() << " C=" << lay.c_wire()
                      << " S'=" << lay.sp_wire(1) << ".." << lay.sp_wire(2 * (rp.B + rp.m - 1))
                      << " C'=" << lay.c_prime() << " a=" << lay.answer() << '\n';
            std::cout << "register width (n+5B+3m+1): " << lay.width() << '\n';
        }
    } else {
        fail(errc::bad_argument, "--mode takes unitary, affine or uncompute");
    }
    if (lower) {
        LowerReport rep = lower_to_small_gates(compiled, max_arity);
        compiled = rep.circuit;
        std::cout << "lowered flips: " << rep.lowered << '\n';
        std::cout << "ancilla pool: " << rep.pool_size << '\n';
    }
    std::cout << "total width: " << compiled.final_width() << '\n';
    auto [gates, entries] = compiled.cost();
    std::cout << "gates: " << gates << '\n';
    std::cout << "matrix entries: " << entries << '\n';
    std::ofstream f(out_file);
    if (!f) fail(errc::bad_argument, "cannot open '" + out_file + "'");
    write_circuit(f, compiled);
    std::cout << "wrote: " << out_file << '\n';
    return 0;
}

int cmd_unique_sat(const std::string& cnf_file) {
    std::ifstream f(cnf_file);
    if (!f) fail(errc::bad_argument, "cannot open '" + cnf_file + "'");
    BooleanFormula formula = read_dimacs(f);
    std::uint64_t models = sat_count(formula);
    ReversiblePredicate rp = formula_to_reversible(formula);
    RingSpec z2 = RingSpec::make_cyclic(2);
    Circuit c = build_unitary_modkp(rp, z2);
    Decision d = decide(c, "", StateSpace::l2);
    std::cout << kReportHeader << '\n';
    std::cout << "circuit: " << to_string(d) << '\n';
    std::cout << "referee: " << models << '\n';
    if (models > 1)
        std::cout << "promise: violated (" << models << " models; count mod 2 = " << models % 2
                  << ", so the circuit reports the parity, not uniqueness)\n";
    else
        std::cout << "promise: holds\n";
    bool agree = (d == Decision::One) == (models % 2 == 1) && d != Decision::NotNecessary;
    std::cout << "agreement: " << (agree ? "yes" : "NO") << '\n';
    return agree ? 0 : kExitVerification;
}

int cmd_count(const std::string& cnf_file, const std::string& pred_file, const std::string& input,
              i64 k) {
    ReversiblePredicate rp = load_predicate(cnf_file, pred_file);
    if (static_cast<int>(input.size()) != rp.n)
        fail(errc::bad_argument, "input has " + std::to_string(input.size()) +
                                     " bits, predicate expects " + std::to_string(rp.n));
    std::uint64_t x = 0;
    for (int i = 0; i < rp.n; ++i)
        if (input[i] == '1') x |= std::uint64_t(1) << i;
    CountReport rep = count_accepting(rp, x, k);
    std::cout << kReportHeader << '\n';
    std::cout << rep.text();
    if (k >= 2) {
        std::cout << "accepting mod " << k << ": " << rep.accepting_mod_k << '\n';
        std::cout << "upk: " << to_string(upk_decide(rp, x, k)) << '\n';
    }
    std::cout << rep.record() << '\n';
    return 0;
}

int cmd_check_state(const std::string& state_file) {
    std::ifstream f(state_file);
    if (!f) fail(errc::bad_argument, "cannot open '" + state_file + "'");
    ModalState psi = read_state(f);
    SpaceMembership m = state_space_membership(psi);
    auto yn = [](bool b) { return b ? "yes" : "no"; };
    std::cout << kReportHeader << '\n';
    std::cout << "bits: " << psi.bits() << '\n';
    std::cout << "generic: " << yn(m.generic) << '\n';
    std::cout << "l1: " << yn(m.l1) << '\n';
    std::cout << "l2: " << yn(m.l2) << '\n';
    if (!m.generic && !m.l1 && !m.l2) {
        std::cout << "necessary: none (not a state in any supported space)\n";
        return 0;
    }
    StateSpace space = m.generic ? StateSpace::generic : m.l1 ? StateSpace::l1 : StateSpace::l2;
    bool any = false;
    for (int j = 1; j <= psi.bits(); ++j)
        for (const char* v : {"0", "1"})
            if (is_necessary(psi, {j}, v, space)) {
                std::cout << "necessary: position " << j << " = " << v << '\n';
                any = true;
            }
    if (!any) std::cout << "necessary: none\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact modal-circuit simulator over cyclic and Galois rings"};
    app.require_subcommand(1);

    auto* run_cmd = app.add_subcommand("run", "run a circuit on a basis input and decide");
    std::string run_circuit, run_input, run_space;
    bool run_show = false;
    run_cmd->add_option("circuit", run_circuit, "circuit file")->required();
    run_cmd->add_option("--input", run_input, "input bit string")->required();
    run_cmd->add_flag("--show-state", run_show, "print the final state");
    run_cmd->add_option("--space", run_space, "decision space: generic|l1|l2");

    auto* vg_cmd = app.add_subcommand("verify-gate", "classify a gate file");
    std::string vg_file, vg_require;
    vg_cmd->add_option("gate", vg_file, "gate file")->required();
    vg_cmd->add_option("--require", vg_require, "fail unless unitary|affine|invertible");

    auto* kg_cmd = app.add_subcommand("k-gate", "emit the branching gate K over Z_k");
    i64 kg_k = 0;
    std::string kg_out;
    kg_cmd->add_option("--k", kg_k, "modulus")->required();
    kg_cmd->add_option("-o,--out", kg_out, "output gate file (default: stdout)");

    auto* comp_cmd = app.add_subcommand("compile", "build Mod_kP simulation circuits");
    std::string comp_mode, comp_cnf, comp_pred, comp_circuit, comp_out;
    i64 comp_k = 2;
    bool comp_lower = false;
    int comp_max_arity = 4;
    comp_cmd->add_option("--mode", comp_mode, "unitary|affine|uncompute")->required();
    comp_cmd->add_option("--cnf", comp_cnf, "DIMACS CNF input");
    comp_cmd->add_option("--predicate", comp_pred, "reversible predicate file");
    comp_cmd->add_option("--circuit", comp_circuit, "circuit to wrap (uncompute mode)");
    comp_cmd->add_option("--k", comp_k, "modulus (unitary/affine modes)");
    comp_cmd->add_option("-o,--out", comp_out, "output circuit file")->required();
    comp_cmd->add_flag("--lower", comp_lower, "replace wide flips by Toffoli ladders");
    comp_cmd->add_option("--max-arity", comp_max_arity, "arity bound for --lower (default 4)");

    auto* us_cmd = app.add_subcommand("unique-sat", "UNIQUE-SAT demo over Z_2");
    std::string us_cnf;
    us_cmd->add_option("--cnf", us_cnf, "DIMACS CNF input")->required();

    auto* cnt_cmd = app.add_subcommand("count", "brute-force accepting-branch count");
    std::string cnt_cnf, cnt_pred, cnt_input;
    i64 cnt_k = 0;
    cnt_cmd->add_option("--cnf", cnt_cnf, "DIMACS CNF input");
    cnt_cmd->add_option("--predicate", cnt_pred, "reversible predicate file");
    cnt_cmd->add_option("--input", cnt_input, "input bit string (default: empty)");
    cnt_cmd->add_option("--k", cnt_k, "also report the count mod k and the UP_k decision");

    auto* cs_cmd = app.add_subcommand("check-state", "state-space membership of a state file");
    std::string cs_file;
    cs_cmd->add_option("state", cs_file, "state file")->required();

    try {
        app.parse(argc, argv);
        if (run_cmd->parsed()) return cmd_run(run_circuit, run_input, run_show, run_space);
        if (vg_cmd->parsed()) return cmd_verify_gate(vg_file, vg_require);
        if (kg_cmd->parsed()) return cmd_k_gate(kg_k, kg_out);
        if (comp_cmd->parsed())
            return cmd_compile(comp_mode, comp_cnf, comp_pred, comp_circuit, comp_k, comp_out,
                               comp_lower, comp_max_arity);
        if (us_cmd->parsed()) return cmd_unique_sat(us_cnf);
        if (cnt_cmd->parsed()) return cmd_count(cnt_cnf, cnt_pred, cnt_input, cnt_k);
        if (cs_cmd->parsed()) return cmd_check_state(cs_file);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
