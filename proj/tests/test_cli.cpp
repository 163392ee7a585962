#include <doctest.h>

#include <array>
#include <cstdio>
#include <string>

#include "support/testutil.hpp"

namespace {

struct RunResult {
    int code;
    std::string out;
};

RunResult run_raw(const std::string& cmd_line) {
    std::string cmd = cmd_line + " 2>/dev/null";
    std::array<char, 4096> buf{};
    std::string out;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    while (fgets(buf.data(), buf.size(), p)) out += buf.data();
    int status = pclose(p);
    return {WEXITSTATUS(status), out};
}

RunResult run(const std::string& args) { return run_raw(std::string(CLI_PATH) + " " + args); }

std::string fx(const char* name) { return testutil::fixture_path(name); }

} // namespace

TEST_CASE("cli: check reports stratification") {
    RunResult r = run("check " + fx("sec9_item5.dl"));
    CHECK(r.code == 0);
    CHECK(r.out.find("not stratified; direct mode requires --allow-total") != std::string::npos);

    RunResult ok = run("check " + fx("a1.dl"));
    CHECK(ok.code == 0);
    CHECK(ok.out.find("partitioned: yes") != std::string::npos);
    CHECK(ok.out.find("stratified: yes") != std::string::npos);
}

TEST_CASE("cli: minimal answers with and without compilation") {
    std::string comp = fx("../build_tmp_cli.comp");
    RunResult c = run("compile " + fx("a1.dl") + " -o " + comp);
    CHECK(c.code == 0);

    RunResult direct = run("minimal-answers " + fx("a1.dl") + " --json");
    RunResult compiled =
        run("minimal-answers " + fx("a1.dl") + " --mode compiled --comp " + comp + " --json");
    CHECK(direct.code == 0);
    CHECK(compiled.code == 0);
    CHECK(direct.out == compiled.out);
    CHECK(direct.out.find("q2") != std::string::npos);

    RunResult text = run("minimal-answers " + fx("a1.dl"));
    CHECK(text.out.find("q2 | q4") != std::string::npos);
    CHECK(text.out.find("q2 | s3") != std::string::npos);

    // stale compiled base: strict mode refuses, lax mode recompiles
    RunResult stale_strict =
        run("minimal-answers " + fx("a3.dl") + " --mode compiled --comp " + comp + " --strict");
    CHECK(stale_strict.code == 0); // same intension: not stale
    std::string edited = fx("../build_tmp_edited.dl");
    {
        std::ofstream f(edited);
        f << "#ext r1, s3.\nq2 & ~r1 -> q1.\nq1 -> q2.\nr1 | s3.\n";
    }
    RunResult strict = run("minimal-answers " + edited + " --mode compiled --comp " + comp +
                           " --strict");
    CHECK(strict.code == 3);
    RunResult lax = run("minimal-answers " + edited + " --mode compiled --comp " + comp);
    CHECK(lax.code == 0);
    std::remove(comp.c_str());
    std::remove(edited.c_str());
}

TEST_CASE("cli: oracle agreement") {
    RunResult engine = run("minimal-answers " + fx("a1.dl") + " --json");
    RunResult oracle = run("oracle minimal-answers " + fx("a1.dl") + " --json");
    CHECK(engine.code == 0);
    CHECK(oracle.code == 0);
    CHECK(engine.out == oracle.out);
}

TEST_CASE("cli: trees and covers output") {
    RunResult t = run("trees " + fx("a_int.dl") + " --atom q4 --partial");
    CHECK(t.code == 0);
    CHECK(t.out == "+q1 +q2 -q4 -s3\n");

    RunResult c = run("covers " + fx("note4.dl") + " --goal \"~c\"");
    CHECK(c.code == 0);
    CHECK(c.out == "-a +b -c\n");
}

TEST_CASE("cli: exit codes") {
    std::string bad = fx("../build_tmp_bad.dl");
    {
        std::ofstream f(bad);
        f << "-> .\n";
    }
    CHECK(run("check " + bad).code == 2);
    std::remove(bad.c_str());

    CHECK(run("minimal-answers " + fx("sec9_item5.dl")).code == 3);
    CHECK(run("minimal-answers " + fx("sec9_item5.dl") + " --allow-total").code == 3);
    CHECK(run("nonsense").code != 0);

    // oracle bound exhaustion
    std::string big = fx("../build_tmp_big.dl");
    {
        std::ofstream f(big);
        for (int i = 0; i < 25; ++i) f << "x" << i << ".\n";
    }
    CHECK(run("oracle stable-models " + big).code == 4);
    std::remove(big.c_str());
}

TEST_CASE("cli: covers flags and transform output") {
    RunResult lim = run("covers " + fx("a1.dl") + " --goal q2 --int-total --limit 1");
    CHECK(lim.code == 0);
    CHECK(lim.out == "+q1 +q2 +q3 -q4 +r1 +s1 +s2 -s3\n");

    RunResult min = run("covers " + fx("intro.dl") + " --goal d --minimal-only");
    CHECK(min.code == 0);
    CHECK(min.out.empty()); // d is entailed: no cover at all

    RunResult tf = run("transform " + fx("note4.dl"));
    CHECK(tf.code == 0);
    CHECK(tf.out.find("__false") != std::string::npos);
    CHECK(tf.out.find("% __t_") != std::string::npos);
}

TEST_CASE("cli: oracle bound override") {
    std::string big = fx("../build_tmp_big2.dl");
    {
        std::ofstream f(big);
        for (int i = 0; i < 21; ++i) f << "y" << i << ".\n";
    }
    CHECK(run("oracle models " + big).code == 4);
    // popen runs through the shell, so the env prefix works
    RunResult ok = run_raw(std::string("MINANS_ORACLE_BOUND=22 ") + CLI_PATH + " oracle models " + big);
    CHECK(ok.code == 0);
    std::remove(big.c_str());
}

TEST_CASE("cli: json determinism") {
    RunResult a = run("minimal-answers " + fx("a3.dl") + " --json");
    RunResult b = run("minimal-answers " + fx("a3.dl") + " --json --jobs 3");
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    RunResult c = run("stable-models " + fx("intro.dl") + " --json");
    RunResult d = run("stable-models " + fx("intro.dl") + " --json");
    CHECK(c.out == d.out);
}
