#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>

#include "CLI11.hpp"
#include "sasq/harness/harness.hpp"
#include "sasq/util/error.hpp"

#ifdef SASQ_HAVE_FETCH
int fetch_mnist_main(const std::string& out_dir, bool insecure_http);
#endif

namespace {

using sasq::harness::ExperimentSpec;

void add_spec_options(CLI::App* cmd, ExperimentSpec& spec, std::string& digits) {
    cmd->add_option("--task", spec.task, "Task: lines | mnist_pair")
        ->check(CLI::IsMember({"lines", "mnist_pair"}));
    cmd->add_option("--digits", digits, "Digit pair for mnist_pair, e.g. 1,3");
    cmd->add_option("--encoding", spec.encoding, "angle | amplitude (default per task)")
        ->check(CLI::IsMember({"", "angle", "amplitude"}));
    cmd->add_option("--patch-size", spec.patch_size, "Patch side in pixels (default per task)");
    cmd->add_option("--embed-dim", spec.embed_dim, "Embedding dimension per patch");
    cmd->add_option("--layers", spec.kernel_layers, "Entangling kernel layers per block");
    cmd->add_option("--depth", spec.depth, "Stacked QFT-kernel-IQFT blocks");
    cmd->add_flag_callback("--no-qft", [&spec] { spec.use_qft = false; },
                           "Drop the QFT / inverse-QFT blocks");
    cmd->add_flag_callback("--no-perceptron", [&spec] { spec.use_perceptron = false; },
                           "Drop the readout perceptron");
    cmd->add_option("--loss", spec.loss, "l1 | soft_margin")
        ->check(CLI::IsMember({"l1", "soft_margin"}));
    cmd->add_option("--epochs", spec.epochs, "Training epochs (default per task)");
    cmd->add_option("--lr", spec.learning_rate, "ADAM learning rate");
    cmd->add_option("--batch-size", spec.batch_size, "Mini-batch size");
    cmd->add_option("--seed", spec.seed, "Experiment seed");
    cmd->add_option("--restarts", spec.num_restarts, "Independent restarts");
    cmd->add_option("--grad-engine", spec.grad_engine, "adjoint | parameter_shift")
        ->check(CLI::IsMember({"adjoint", "parameter_shift"}));
    cmd->add_option("--train-count", spec.train_count, "lines: training images");
    cmd->add_option("--val-count", spec.val_count, "lines: validation images");
    cmd->add_option("--mnist-train", spec.mnist_train, "mnist: training subsample");
    cmd->add_option("--mnist-val", spec.mnist_val, "mnist: validation subsample");
    cmd->add_option("--mnist-dir", spec.mnist_dir, "Directory with the four IDX files")
        ->envname("MNIST_DIR");
    cmd->add_option("--out", spec.out_dir, "Output directory");
    cmd->add_flag_callback(
        "--train-embedding", [&spec] { spec.trainable_embedder = true; },
        "Train the patch embedding jointly");
    cmd->add_flag_callback(
        "--freeze-embedding", [&spec] { spec.trainable_embedder = false; },
        "Freeze the patch embedding at its random initialization");
    cmd->add_flag("--verbose", spec.verbose, "Per-epoch progress on stderr");
    cmd->add_option("--config", spec.config_path,
                    "Flat key=value config file; command-line flags override");
}

// Flat key=value file (one pair per line, '#' comments). Keys use the flag
// names without the leading dashes; boolean flags take 0/1.
void apply_config_file(ExperimentSpec& spec, std::string& digits, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw sasq::format_error("cannot open config file '" + path + "'");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        while (!line.empty() && (line.back() == ' ' || line.back() == '\r' || line.back() == '\t'))
            line.pop_back();
        std::size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos) continue;
        const auto eq = line.find('=', start);
        if (eq == std::string::npos)
            throw sasq::format_error("config line " + std::to_string(lineno) + ": expected key=value");
        const std::string key = line.substr(start, eq - start);
        const std::string value = line.substr(eq + 1);
        if (key == "task") spec.task = value;
        else if (key == "digits") digits = value;
        else if (key == "encoding") spec.encoding = value;
        else if (key == "patch-size") spec.patch_size = std::stoi(value);
        else if (key == "embed-dim") spec.embed_dim = std::stoi(value);
        else if (key == "layers") spec.kernel_layers = std::stoi(value);
        else if (key == "depth") spec.depth = std::stoi(value);
        else if (key == "no-qft") spec.use_qft = std::stoi(value) == 0;
        else if (key == "no-perceptron") spec.use_perceptron = std::stoi(value) == 0;
        else if (key == "loss") spec.loss = value;
        else if (key == "epochs") spec.epochs = std::stoi(value);
        else if (key == "lr") spec.learning_rate = std::stod(value);
        else if (key == "batch-size") spec.batch_size = std::stoi(value);
        else if (key == "seed") spec.seed = std::stoull(value);
        else if (key == "restarts") spec.num_restarts = std::stoi(value);
        else if (key == "grad-engine") spec.grad_engine = value;
        else if (key == "train-count") spec.train_count = std::stoi(value);
        else if (key == "val-count") spec.val_count = std::stoi(value);
        else if (key == "mnist-train") spec.mnist_train = std::stoi(value);
        else if (key == "mnist-val") spec.mnist_val = std::stoi(value);
        else if (key == "mnist-dir") spec.mnist_dir = value;
        else if (key == "out") spec.out_dir = value;
        else if (key == "train-embedding") spec.trainable_embedder = std::stoi(value) != 0;
        else if (key == "verbose") spec.verbose = std::stoi(value) != 0;
        else throw sasq::format_error("config line " + std::to_string(lineno) +
                                      ": unknown key '" + key + "'");
    }
}

void apply_digits(ExperimentSpec& spec, const std::string& digits) {
    if (digits.empty()) return;
    const auto comma = digits.find(',');
    if (comma == std::string::npos)
        throw sasq::format_error("--digits wants two comma-separated digits, e.g. 1,3");
    spec.digit_a = std::stoi(digits.substr(0, comma));
    spec.digit_b = std::stoi(digits.substr(comma + 1));
}

sasq::harness::AblationCase parse_case(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw sasq::format_error("case format: name:eps=4,l=1[,noqft][,noperc]");
    sasq::harness::AblationCase c;
    c.name = text.substr(0, colon);
    std::string rest = text.substr(colon + 1);
    std::size_t pos = 0;
    while (pos < rest.size()) {
        auto next = rest.find(',', pos);
        if (next == std::string::npos) next = rest.size();
        const std::string item = rest.substr(pos, next - pos);
        pos = next + 1;
        if (item.rfind("eps=", 0) == 0) c.embed_dim = std::stoi(item.substr(4));
        else if (item.rfind("l=", 0) == 0) c.kernel_layers = std::stoi(item.substr(2));
        else if (item == "noqft") c.use_qft = false;
        else if (item == "noperc") c.use_perceptron = false;
        else if (!item.empty()) throw sasq::format_error("unknown case item '" + item + "'");
    }
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Statevector simulator and trainer for the quantum Fourier-attention classifier"};
    app.require_subcommand(1);

    ExperimentSpec spec;
    std::string digits;

    auto* generate = app.add_subcommand("generate", "Write a synthetic lines fixture");
    auto* train = app.add_subcommand("train", "Train with restarts; write metrics + checkpoints");
    auto* ablate = app.add_subcommand("ablate", "Run an ablation sweep");
    auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint on a dataset split");
    auto* resources = app.add_subcommand("resources", "Static qubit/parameter/gate estimate");

    std::string g_digits, t_digits, a_digits, e_digits, r_digits;
    add_spec_options(generate, spec, g_digits);
    add_spec_options(train, spec, t_digits);
    add_spec_options(ablate, spec, a_digits);
    add_spec_options(eval, spec, e_digits);
    add_spec_options(resources, spec, r_digits);

    std::vector<std::string> case_texts;
    ablate->add_option("--case", case_texts,
                       "Ablation case name:eps=4,l=1[,noqft][,noperc]; repeatable. "
                       "Defaults to the nine-case digit-pair sweep");

    std::string checkpoint, split = "test";
    eval->add_option("--checkpoint", checkpoint, "Checkpoint file")->required();
    eval->add_option("--split", split, "train | val | test")
        ->check(CLI::IsMember({"train", "val", "test"}));

    int classes = 2;
    int prep_depth = 0;
    resources->add_option("--classes", classes, "Number of classes (readout sizing)");
    resources->add_option("--prep-depth", prep_depth,
                          "Approximate amplitude-preparation depth b (0 = worst case only)");

#ifdef SASQ_HAVE_FETCH
    auto* fetch = app.add_subcommand("fetch-mnist", "Download and verify the MNIST IDX files");
    std::string fetch_out = "mnist";
    bool insecure = false;
    fetch->add_option("--out", fetch_out, "Destination directory");
    fetch->add_flag("--http", insecure, "Use plain http instead of https");
#endif

    // config file first, then flags override via a second parse
    try {
        app.parse(argc, argv);
        if (!spec.config_path.empty()) {
            ExperimentSpec file_spec;
            std::string file_digits;
            apply_config_file(file_spec, file_digits, spec.config_path);
            spec = file_spec;
            digits = file_digits;
            spec.config_path.clear();
            for (std::string* d : {&g_digits, &t_digits, &a_digits, &e_digits, &r_digits})
                if (d->empty()) *d = file_digits;
            app.clear();
            app.parse(argc, argv);
        }
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const sasq::error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }

    try {
        if (generate->parsed()) {
            apply_digits(spec, g_digits);
            const std::string path = sasq::harness::run_generate(spec);
            std::printf("wrote %s (%d records)\n", path.c_str(), spec.train_count);
            return 0;
        }
        if (train->parsed()) {
            apply_digits(spec, t_digits);
            const auto result = sasq::harness::run_training(spec);
            std::printf("train_acc %s\n",
                        sasq::harness::mean_std_percent(result.train_acc_mean,
                                                        result.train_acc_std)
                            .c_str());
            std::printf("val_acc   %s\n",
                        sasq::harness::mean_std_percent(result.val_acc_mean, result.val_acc_std)
                            .c_str());
            if (!result.runs.empty() && result.runs.front().test_accuracy >= 0)
                std::printf("test_acc  %s\n",
                            sasq::harness::mean_std_percent(result.test_acc_mean,
                                                            result.test_acc_std)
                                .c_str());
            std::printf("summary   %s\n", result.summary_path.c_str());
            return 0;
        }
        if (ablate->parsed()) {
            apply_digits(spec, a_digits);
            std::vector<sasq::harness::AblationCase> cases;
            for (const auto& text : case_texts) cases.push_back(parse_case(text));
            if (cases.empty()) cases = sasq::harness::default_ablation_cases();
            const std::string table_path =
                (std::filesystem::path(spec.out_dir) / "ablation.txt").string();
            std::filesystem::create_directories(spec.out_dir);
            const auto rows = sasq::harness::run_ablation(spec, cases, table_path);
            for (const auto& row : rows)
                std::printf("%-22s %s\n", row.name.c_str(),
                            sasq::harness::mean_std_percent(row.acc_mean, row.acc_std).c_str());
            std::printf("table     %s\n", table_path.c_str());
            return 0;
        }
        if (eval->parsed()) {
            apply_digits(spec, e_digits);
            const auto [loss, acc] = sasq::harness::run_eval(checkpoint, spec, split);
            std::printf("loss %.6f\naccuracy %.6f\n", loss, acc);
            return 0;
        }
        if (resources->parsed()) {
            apply_digits(spec, r_digits);
            const auto est = sasq::harness::run_resources(
                spec, classes,
                prep_depth > 0 ? std::optional<int>(prep_depth) : std::nullopt);
            std::fputs(est.report().c_str(), stdout);
            return 0;
        }
#ifdef SASQ_HAVE_FETCH
        if (fetch->parsed()) return fetch_mnist_main(fetch_out, insecure);
#endif
    } catch (const sasq::error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
