#include <doctest.h>

#include <callwitness/trace_protocol.hpp>

using namespace callwitness;

TEST_CASE("header and call lines") {
    CHECK(format_trace_header(Language::javascript) == "CALLWITNESS\t1\tjavascript\n");
    CHECK(format_trace_call("m.f", "m.g") == "CALL\tm.f\tm.g\n");
}

TEST_CASE("well-formed trace") {
    const auto t = parse_trace("CALLWITNESS\t1\tjava\nCALL\tMain:<toplevel>\tMain:main(String[])\nCALL\ta\tb\n");
    REQUIRE(t.ok());
    CHECK(t.language == Language::java);
    REQUIRE(t.calls.size() == 2);
    CHECK(t.calls[0].first == "Main:<toplevel>");
    CHECK(t.calls[1].second == "b");
}

TEST_CASE("header only is a valid empty trace") {
    const auto t = parse_trace("CALLWITNESS\t1\tpython\n");
    CHECK(t.ok());
    CHECK(t.calls.empty());
}

TEST_CASE("broken traces keep the calls before the problem") {
    const auto t = parse_trace("CALLWITNESS\t1\tpython\nCALL\ta\tb\nCALL\tonly-one-field\nCALL\tc\td\n");
    CHECK_FALSE(t.ok());
    REQUIRE(t.calls.size() == 1);
    CHECK(t.calls[0].first == "a");
}

TEST_CASE("rejected inputs") {
    const char* bad[] = {
        "",
        "CALL\ta\tb\n",
        "CALLWITNESS\t2\tpython\n",
        "CALLWITNESS\t1\tcobol\n",
        "CALLWITNESS\t1\tpython\nRETURN\ta\n",
        "CALLWITNESS\t1\tpython\nCALL\ta\tb",  // truncated last line
    };
    for (const char* data : bad) {
        CAPTURE(data);
        CHECK_FALSE(parse_trace(data).ok());
    }
}
