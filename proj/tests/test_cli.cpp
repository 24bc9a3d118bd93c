#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "support/toy_corpus.hpp"

namespace fs = std::filesystem;

namespace {

struct CliResult {
    int code = -1;
    std::string output;
};

const char* cli_path() {
    const char* path = std::getenv("SONGPREP_CLI");
    REQUIRE_MESSAGE(path != nullptr, "SONGPREP_CLI must point at the songprep binary");
    return path;
}

CliResult run_cli(const std::string& args) {
    static int invocation = 0;
    const fs::path capture =
        fs::temp_directory_path() / ("songprep_cli_out_" + std::to_string(invocation++) + ".txt");
    const std::string command =
        std::string(cli_path()) + " " + args + " > " + capture.string() + " 2>&1";
    const int status = std::system(command.c_str());
    CliResult result;
    result.code = WEXITSTATUS(status);
    std::ifstream in(capture);
    std::ostringstream buf;
    buf << in.rdbuf();
    result.output = buf.str();
    fs::remove(capture);
    return result;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct Workspace {
    fs::path root;
    std::string dict;
    std::string midi_dir;

    Workspace() {
        root = fs::temp_directory_path() / "songprep_cli_ws";
        fs::remove_all(root);
        fs::create_directories(root);
        dict = testsupport::write_fixture_dict(root);
        midi_dir = (root / "midi").string();
        testsupport::write_toy_midi_corpus(root / "midi", 12, 90210);
    }
    ~Workspace() { fs::remove_all(root); }

    std::string path(const std::string& name) const { return (root / name).string(); }
};

}  // namespace

TEST_CASE("cli pipeline: ingest, lexicon, phrases, batches, evaluate, stats") {
    Workspace ws;

    // ingest
    auto ingest = run_cli("ingest --input " + ws.midi_dir + " --dict " + ws.dict + " --output " +
                          ws.path("corpus.txt"));
    CHECK(ingest.code == 0);
    CHECK(ingest.output.find("retained") != std::string::npos);
    CHECK(fs::exists(ws.path("corpus.txt")));
    CHECK(fs::exists(ws.path("corpus.txt.vocab")));

    const std::string corpus_once = slurp(ws.path("corpus.txt"));
    CHECK(corpus_once.rfind("#songprep-corpus v1", 0) == 0);

    // byte-identical rerun
    auto again = run_cli("ingest --input " + ws.midi_dir + " --dict " + ws.dict + " --output " +
                         ws.path("corpus2.txt"));
    CHECK(again.code == 0);
    CHECK(slurp(ws.path("corpus2.txt")) == corpus_once);

    // build-lexicon
    auto lexicon = run_cli("build-lexicon --corpus " + ws.path("corpus.txt") + " --dict " +
                           ws.dict + " --out-prefix " + ws.path("lex"));
    CHECK(lexicon.code == 0);
    CHECK(fs::exists(ws.path("lex.smr.lexicon")));
    CHECK(fs::exists(ws.path("lex.srr.lexicon")));
    const std::string smr_once = slurp(ws.path("lex.smr.lexicon"));
    CHECK(smr_once.rfind("#songprep-lexicon v1", 0) == 0);

    auto lexicon2 = run_cli("build-lexicon --corpus " + ws.path("corpus.txt") + " --dict " +
                            ws.dict + " --out-prefix " + ws.path("lex2"));
    CHECK(lexicon2.code == 0);
    CHECK(slurp(ws.path("lex2.smr.lexicon")) == smr_once);

    // phrases
    auto phrases = run_cli("phrases --corpus " + ws.path("corpus.txt") + " --output " +
                           ws.path("phrases.txt"));
    CHECK(phrases.code == 0);
    CHECK(slurp(ws.path("phrases.txt")).find("endings=") != std::string::npos);

    // make-batches, all objectives, reproducible under the seed
    const std::string batch_args = " --corpus " + ws.path("corpus.txt") + " --dict " + ws.dict +
                                   " --lexicon-prefix " + ws.path("lex") + " --objective all";
    auto batches = run_cli("make-batches --seed 5" + batch_args + " --output " + ws.path("b1.txt"));
    CHECK(batches.code == 0);
    auto batches2 =
        run_cli("make-batches --seed 5" + batch_args + " --output " + ws.path("b2.txt"));
    CHECK(batches2.code == 0);
    CHECK(slurp(ws.path("b1.txt")) == slurp(ws.path("b2.txt")));
    auto batches3 =
        run_cli("make-batches --seed 6" + batch_args + " --output " + ws.path("b3.txt"));
    CHECK(batches3.code == 0);
    CHECK(slurp(ws.path("b1.txt")) != slurp(ws.path("b3.txt")));

    // clm objective
    auto clm = run_cli("make-batches --seed 5 --corpus " + ws.path("corpus.txt") + " --dict " +
                       ws.dict + " --objective clm --output " + ws.path("clm.txt"));
    CHECK(clm.code == 0);
    CHECK(slurp(ws.path("clm.txt")).find("objective=clm") != std::string::npos);

    // evaluate corpus against itself: perfect similarities, zero distance
    auto eval = run_cli("evaluate --generated " + ws.path("corpus.txt") + " --reference " +
                        ws.path("corpus.txt"));
    CHECK(eval.code == 0);
    CHECK(eval.output.find("D_P(%)   100.00") != std::string::npos);
    CHECK(eval.output.find("MD       0.00") != std::string::npos);

    // stats
    auto stats = run_cli("stats --corpus " + ws.path("corpus.txt"));
    CHECK(stats.code == 0);
    CHECK(stats.output.find("songs") != std::string::npos);
    CHECK(stats.output.find("average words per song") != std::string::npos);

    // several generated files aggregate as repeated runs
    auto multi = run_cli("evaluate --generated " + ws.path("corpus.txt") + " " +
                         ws.path("corpus2.txt") + " --reference " + ws.path("corpus.txt"));
    CHECK(multi.code == 0);
    CHECK(multi.output.find("aggregate over 2 runs") != std::string::npos);
}

TEST_CASE("cli error paths use the documented exit codes") {
    Workspace ws;
    run_cli("ingest --input " + ws.midi_dir + " --dict " + ws.dict + " --output " +
            ws.path("corpus.txt"));

    SUBCASE("unreadable input directory") {
        auto r = run_cli("ingest --input " + ws.path("missing-dir") + " --dict " + ws.dict +
                         " --output " + ws.path("x.txt"));
        CHECK(r.code == 2);
    }
    SUBCASE("empty directory gives an empty corpus and zero counts") {
        fs::create_directories(ws.path("empty-dir"));
        auto r = run_cli("ingest --input " + ws.path("empty-dir") + " --dict " + ws.dict +
                         " --output " + ws.path("empty.txt"));
        CHECK(r.code == 0);
        CHECK(r.output.find("input 0") != std::string::npos);
        CHECK(r.output.find("retained 0") != std::string::npos);
        CHECK(slurp(ws.path("empty.txt")).find("songs 0") != std::string::npos);
    }
    SUBCASE("word-level batches without a lexicon") {
        auto r = run_cli("make-batches --corpus " + ws.path("corpus.txt") + " --dict " + ws.dict +
                         " --objective word-smr --output " + ws.path("x.txt"));
        CHECK(r.code == 5);
    }
    SUBCASE("pairing mismatch") {
        // a corpus with fewer songs
        fs::create_directories(ws.path("midi-small"));
        testsupport::write_toy_midi_corpus(ws.path("midi-small"), 3, 123);
        run_cli("ingest --input " + ws.path("midi-small") + " --dict " + ws.dict + " --output " +
                ws.path("small.txt"));
        auto r = run_cli("evaluate --generated " + ws.path("small.txt") + " --reference " +
                         ws.path("corpus.txt"));
        CHECK(r.code == 4);
    }
    SUBCASE("unknown objective is a usage error") {
        auto r = run_cli("make-batches --corpus " + ws.path("corpus.txt") + " --dict " + ws.dict +
                         " --objective bogus --output " + ws.path("x.txt"));
        CHECK(r.code == 1);
    }
    SUBCASE("empty corpus for build-lexicon") {
        std::ofstream(ws.path("empty.txt")) << "#songprep-corpus v1\nsongs 0\n";
        auto r = run_cli("build-lexicon --corpus " + ws.path("empty.txt") + " --dict " + ws.dict +
                         " --out-prefix " + ws.path("nolex"));
        CHECK(r.code == 3);
    }
}

TEST_CASE("cli config file sets defaults, flags override") {
    Workspace ws;
    {
        std::ofstream config(ws.path("run.ini"));
        config << "[ingest]\n";
        config << "min-bars=40\n";  // toy songs are shorter than 40 bars
    }
    auto strict = run_cli("--config " + ws.path("run.ini") + " ingest --input " + ws.midi_dir +
                          " --dict " + ws.dict + " --output " + ws.path("strict.txt"));
    CHECK(strict.code == 0);
    CHECK(strict.output.find("retained 0") != std::string::npos);

    auto relaxed = run_cli("--config " + ws.path("run.ini") + " ingest --min-bars 8 --input " +
                           ws.midi_dir + " --dict " + ws.dict + " --output " +
                           ws.path("relaxed.txt"));
    CHECK(relaxed.code == 0);
    CHECK(relaxed.output.find("retained 0") == std::string::npos);
}
