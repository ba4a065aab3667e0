#include "callwitness/js_instrumenter.hpp"

#include "js_parser.hpp"

namespace callwitness {

namespace {

// One line. Frames are {n: name, i: stack index, on: currently pushed}; an
// awaiting async frame is taken off the stack and pushed back on resumption.
constexpr std::string_view kPrelude =
    "const __cw=(()=>{const fs=require(\"fs\"),out=process.env.CALLWITNESS_TRACE_OUT,"
    "fd=out?fs.openSync(out,\"w\"):null,st=[],top=\"@TOP@\";"
    "const put=(s)=>{if(fd!==null)fs.writeSync(fd,s);};"
    "put(\"CALLWITNESS\\t1\\tjavascript\\n\");"
    "const off=(t)=>{if(t.on){st.length=t.i;t.on=false;}};"
    "return{enter(n){put(\"CALL\\t\"+(st.length?st[st.length-1].n:top)+\"\\t\"+n+\"\\n\");"
    "const t={n,i:st.length,on:true};st.push(t);return t;},"
    "exit(t){off(t);},suspend(t,v){off(t);return v;},"
    "resume(t,v){t.i=st.length;t.on=true;st.push(t);return v;}};})();\n";

std::string prelude_for(const QualifiedName& top, bool use_strict) {
    std::string text(kPrelude);
    text.replace(text.find("@TOP@"), 5, top.text());
    if (use_strict) text.insert(0, "\"use strict\";");
    return text;
}

}  // namespace

FunctionInventory parse_js_subset(std::string_view source, std::string_view module_name) {
    auto parsed = js::parse(source, module_name);
    FunctionInventory inv;
    inv.functions.reserve(parsed.functions.size());
    for (auto& fn : parsed.functions) inv.functions.push_back(std::move(fn.entry));
    return inv;
}

InstrumentedSource instrument_js(std::string_view source, std::string_view module_name) {
    auto parsed = js::parse(source, module_name);
    QualifiedName top = toplevel_name(Language::javascript, module_name);

    std::vector<Insertion> ins;
    ins.push_back({parsed.prelude_offset, false, -1, prelude_for(top, parsed.program_use_strict)});
    for (const auto& fn : parsed.functions) {
        std::string enter = "const __cwT=__cw.enter(\"" + fn.entry.name.text() + "\");try{";
        if (fn.use_strict) enter.insert(0, "\"use strict\";");
        const std::string leave = "}finally{__cw.exit(__cwT);}";
        if (fn.concise) {
            ins.push_back({fn.body_open, false, fn.depth, "{" + enter + "return ("});
            ins.push_back({fn.body_close, true, fn.depth, ");" + leave + "}"});
        } else if (fn.body_open == fn.body_close) {
            ins.push_back({fn.body_open, false, fn.depth, enter + leave});
        } else {
            ins.push_back({fn.body_open, false, fn.depth, enter});
            ins.push_back({fn.body_close, true, fn.depth, leave});
        }
    }
    for (const auto& aw : parsed.awaits) {
        ins.push_back({aw.begin, false, aw.depth, "__cw.resume(__cwT,"});
        ins.push_back({aw.after_keyword, false, aw.depth, " __cw.suspend(__cwT,"});
        ins.push_back({aw.operand_end, true, aw.depth, "))"});
    }

    InstrumentedSource out{apply_insertions(source, std::move(ins)), {}, 1, std::move(top)};
    out.inventory.functions.reserve(parsed.functions.size());
    for (auto& fn : parsed.functions) out.inventory.functions.push_back(std::move(fn.entry));
    return out;
}

}  // namespace callwitness
