// splitparse: constituency and sentence-level discourse parsing by
// conditional span splitting. Subcommands: train, parse, eval, codec.

#include <iostream>

#include "CLI11.hpp"
#include "splitparse/error.hpp"
#include "splitparse/run.hpp"

namespace {

using splitparse::RunConfig;

void add_common(CLI::App* cmd, RunConfig& cfg, std::string& mode) {
  cmd->add_option("--mode", mode, "syntax or discourse")->capture_default_str();
  cmd->add_option("--model", cfg.model_path, "model checkpoint path");
  cmd->add_option("--beam", cfg.beam, "beam width (0 = model default)");
  cmd->add_option("--seed", cfg.train.seed, "random seed")->capture_default_str();
  cmd->add_option("--out", cfg.out_path, "also write output to this file");
  cmd->set_config("--config", "", "key=value config file; flags override it");
}

void add_model_flags(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--word-emb-dim", cfg.model.word_emb_dim)->capture_default_str();
  cmd->add_option("--char-emb-dim", cfg.model.char_emb_dim)->capture_default_str();
  cmd->add_option("--char-rnn-hidden", cfg.model.char_rnn_hidden)->capture_default_str();
  cmd->add_option("--hidden", cfg.model.encoder_hidden, "LSTM hidden size per direction")
      ->capture_default_str();
  cmd->add_option("--encoder-layers", cfg.model.encoder_layers)->capture_default_str();
  cmd->add_option("--decoder-layers", cfg.model.decoder_layers)->capture_default_str();
  cmd->add_option("--mlp-dim", cfg.model.mlp_dim)->capture_default_str();
  cmd->add_option("--dropout", cfg.model.dropout)->capture_default_str();
  cmd->add_option("--beam-width", cfg.model.beam_width, "default decoding beam width")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"conditional-splitting constituency and discourse parser"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string mode = "syntax";

  CLI::App* train = app.add_subcommand("train", "train a model on a treebank");
  add_common(train, cfg, mode);
  add_model_flags(train, cfg);
  train->add_option("--train", cfg.train_path, "training treebank")->required();
  train->add_option("--dev", cfg.dev_path, "development treebank for model selection");
  train->add_option("--epochs", cfg.train.max_epochs)->capture_default_str();
  train->add_option("--min-word-freq", cfg.min_word_freq)->capture_default_str();
  train->add_option("--batch-tokens", cfg.train.batch_tokens)->capture_default_str();
  train->add_option("--lr", cfg.train.adam.base_lr)->capture_default_str();
  train->add_option("--decay", cfg.train.adam.decay_rate)->capture_default_str();
  train->add_option("--decay-every", cfg.train.adam.decay_every)->capture_default_str();
  train->add_option("--clip-norm", cfg.train.clip_norm)->capture_default_str();
  train->add_option("--weight-decay", cfg.train.adam.weight_decay)->capture_default_str();
  train->add_option("--early-stop", cfg.train.early_stop_metric,
                    "stop once the dev metric reaches this value");
  train->add_option("--embeddings", cfg.embeddings_path,
                    "pretrained vectors ('word v1 .. vd' lines); replaces the char pathway");

  CLI::App* parse = app.add_subcommand("parse", "parse sentences with a trained model");
  add_common(parse, cfg, mode);
  parse->add_option("--test", cfg.test_path, "input file (default: stdin)");
  parse->add_option("--format", cfg.format, "trees or splits")->capture_default_str();
  parse->add_flag("--oracle", cfg.oracle,
                  "cross-check decoding against the exhaustive oracle for n <= 10");

  CLI::App* eval = app.add_subcommand("eval", "score a model against a gold treebank");
  add_common(eval, cfg, mode);
  eval->add_option("--test", cfg.test_path, "gold treebank")->required();

  CLI::App* codec = app.add_subcommand("codec", "convert treebanks to split sequences and back");
  add_common(codec, cfg, mode);
  codec->add_option("--test", cfg.test_path, "input file (default: stdin)");
  codec->add_option("--format", cfg.format,
                    "splits: trees in, sequences out; trees: sequences in, skeletons out")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
    cfg.mode = splitparse::parse_mode(mode);
    if (train->parsed()) {
      if (cfg.model_path.empty()) throw splitparse::UsageError("train: --model is required");
      splitparse::run_train(cfg, std::cout);
    } else if (parse->parsed()) {
      splitparse::run_parse(cfg, std::cin, std::cout, std::cerr);
    } else if (eval->parsed()) {
      splitparse::run_eval(cfg, std::cout);
    } else if (codec->parsed()) {
      splitparse::run_codec(cfg, std::cin, std::cout);
    }
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  } catch (const splitparse::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const splitparse::InvalidArgument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const splitparse::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const splitparse::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
