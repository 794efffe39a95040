#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "hhls/error.hpp"
#include "hhls/fsm.hpp"
#include "hhls/numfmt.hpp"

namespace hhls {

namespace {

std::string upper(std::string text) {
  for (char& c : text) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return text;
}

int bits_for(std::uint64_t values) {
  int bits = 1;
  while (bits < 64 && (std::uint64_t{1} << bits) < values) ++bits;
  return bits;
}

std::string range(int width) { return width == 1 ? "" : "[" + std::to_string(width - 1) + ":0] "; }

std::string literal(std::int64_t value) {
  const std::int32_t v = wrap32(value);
  if (v == INT32_MIN) return "32'sh80000000";
  if (v < 0) return "(-32'sd" + std::to_string(-static_cast<std::int64_t>(v)) + ")";
  return "32'sd" + std::to_string(v);
}

const char* kLibrary = R"(// Counts N - skip cycles (at least one) from the start strobe; done is high
// in the last of them, in the start cycle itself for a count of one. skip is
// the lag the owning state already carries.
module hhls_timer #(
  parameter N = 1,
  parameter W = 32
) (
  input  wire       clk,
  input  wire       rst,
  input  wire       start,
  input  wire [7:0] skip,
  output wire       done
);
  localparam [W-1:0] NW = N;
  wire [W-1:0] skip_w = {{(W-8){1'b0}}, skip};
  wire [W-1:0] last_now = (skip_w >= NW) ? {W{1'b0}} : NW - skip_w - 1'b1;
  reg  [W-1:0] last;
  reg  [W-1:0] count;
  reg          running;
  always @(posedge clk) begin
    if (rst) begin
      running <= 1'b0;
      count <= {W{1'b0}};
      last <= {W{1'b0}};
    end else if (start) begin
      running <= (last_now != {W{1'b0}});
      count <= 1;
      last <= last_now;
    end else if (running) begin
      if (count == last) running <= 1'b0;
      count <= count + 1'b1;
    end
  end
  assign done = start ? (last_now == {W{1'b0}}) : (running && count == last);
endmodule

module hhls_sync2 (
  input  wire clk,
  input  wire rst,
  input  wire d,
  output wire q
);
  reg [1:0] r;
  always @(posedge clk) begin
    if (rst) r <= 2'b00;
    else r <= {r[0], d};
  end
  assign q = r[1];
endmodule

// Single-entry event channel: holds a request strobe until the receiver
// acknowledges it. A new strobe replaces an unacknowledged one. With
// CROSSING set the strobe crosses clock domains as a synchronized toggle.
module hhls_handshake #(
  parameter W = 1,
  parameter CROSSING = 0
) (
  input  wire         rst,
  input  wire         src_clk,
  input  wire         src_strobe,
  input  wire [W-1:0] src_data,
  input  wire         dst_clk,
  output wire         req,
  output wire [W-1:0] data,
  input  wire         ack
);
  generate
    if (CROSSING) begin : g_cdc
      reg         toggle;
      reg [W-1:0] held;
      always @(posedge src_clk) begin
        if (rst) begin
          toggle <= 1'b0;
          held <= {W{1'b0}};
        end else if (src_strobe) begin
          toggle <= ~toggle;
          held <= src_data;
        end
      end
      wire seen;
      hhls_sync2 u_sync (.clk(dst_clk), .rst(rst), .d(toggle), .q(seen));
      reg         last;
      reg         pending;
      reg [W-1:0] captured;
      always @(posedge dst_clk) begin
        if (rst) begin
          last <= 1'b0;
          pending <= 1'b0;
          captured <= {W{1'b0}};
        end else begin
          last <= seen;
          if (seen != last) begin
            pending <= 1'b1;
            captured <= held;
          end else if (ack) begin
            pending <= 1'b0;
          end
        end
      end
      assign req = pending;
      assign data = captured;
    end else begin : g_local
      reg         pending;
      reg [W-1:0] captured;
      always @(posedge src_clk) begin
        if (rst) begin
          pending <= 1'b0;
          captured <= {W{1'b0}};
        end else if (src_strobe) begin
          pending <= !ack;
          captured <= src_data;
        end else if (ack) begin
          pending <= 1'b0;
        end
      end
      assign req = pending | src_strobe;
      assign data = src_strobe ? src_data : captured;
    end
  endgenerate
endmodule
)";

const char* kFunctions = R"(  function [7:0] lag_inc;
    input [7:0] l;
    lag_inc = (l == 8'd255) ? l : l + 8'd1;
  endfunction
  function [7:0] lag_rest;
    input [7:0] l;
    input [63:0] n;
    lag_rest = ({56'd0, l} >= n) ? l - n[7:0] + 8'd1 : 8'd0;
  endfunction
  function signed [31:0] b2i;
    input b;
    b2i = b ? 32'sd1 : 32'sd0;
  endfunction
  function signed [31:0] s32;
    input signed [31:0] x;
    s32 = x;
  endfunction
  function signed [31:0] sdiv;
    input signed [31:0] a;
    input signed [31:0] b;
    sdiv = (b == 32'sd0) ? 32'sd0 : a / b;
  endfunction
  function signed [31:0] smod;
    input signed [31:0] a;
    input signed [31:0] b;
    smod = (b == 32'sd0) ? 32'sd0 : a % b;
  endfunction
)";

class ComponentEmitter {
 public:
  explicit ComponentEmitter(const FsmIr& fsm) : fsm_(fsm), model_(fsm.source) {
    std::set<std::string> used;
    for (const auto& s : fsm.states) {
      std::string name = "S_" + upper(s.name);
      for (int k = 2; used.count(name); ++k) name = "S_" + upper(s.name) + "_" + std::to_string(k);
      used.insert(name);
      state_names_.push_back(name);
    }
    state_bits_ = bits_for(fsm.states.size());
    for (const auto& v : model_.variables) widths_[v.name] = v.width;
    for (const auto& e : model_.events)
      if (e.direction == Direction::Input && e.is_data()) widths_[e.name] = *e.payload_width;
  }

  std::string module_name() const { return model_.name + "_fsm"; }

  std::string emit() {
    out_ << "// " << model_.name << ": " << fsm_.states.size() << " states, " << fsm_.timers.size()
         << " timers, " << fsm_.mccs.size() << " MCC placeholders\n";
    for (const auto& m : fsm_.mccs)
      out_ << "// mcc_" << m.name << "_done is expected L+1 cycles after mcc_" << m.name
           << "_start, for datapath latency L.\n";
    out_ << "module " << module_name() << " #(\n  parameter CLK_HZ = " << fsm_.clock_hz;
    for (const auto& t : fsm_.timers) out_ << ",\n  parameter " << t.parameter << " = " << t.cycles;
    for (const auto& e : model_.events)
      if (e.direction == Direction::Input) out_ << ",\n  parameter [7:0] IN_LAG_" << upper(e.name) << " = 8'd1";
    out_ << "\n) (\n  input  wire clk,\n  input  wire rst";
    for (const auto& e : model_.events) {
      if (e.direction == Direction::Input) {
        out_ << ",\n  input  wire " << e.name << "_req";
        if (e.is_data()) out_ << ",\n  input  wire signed " << range(*e.payload_width) << e.name << "_data";
        out_ << ",\n  output reg  " << e.name << "_ack";
      } else {
        out_ << ",\n  output reg  " << e.name << "_req";
        if (e.is_data()) out_ << ",\n  output reg  signed " << range(*e.payload_width) << e.name << "_data";
      }
    }
    for (const auto& m : fsm_.mccs) {
      out_ << ",\n  output reg  mcc_" << m.name << "_start";
      for (int k = 0; k < m.arguments; ++k) out_ << ",\n  output reg  signed [31:0] mcc_" << m.name << "_arg" << k;
      out_ << ",\n  input  wire mcc_" << m.name << "_done";
      for (int k = 0; k < m.results; ++k) out_ << ",\n  input  wire signed [31:0] mcc_" << m.name << "_res" << k;
    }
    out_ << ",\n  output wire " << range(state_bits_) << "state_o\n);\n";

    for (std::size_t i = 0; i < fsm_.states.size(); ++i)
      out_ << "  localparam " << range(state_bits_) << state_names_[i] << " = " << state_bits_ << "'d" << i
           << ";\n";
    for (const auto& c : model_.constants)
      out_ << "  localparam signed [31:0] C_" << c.name << " = " << literal(c.value) << ";\n";
    out_ << "\n  reg " << range(state_bits_) << "state, state_n;\n  reg first, first_n;\n"
         << "  reg [7:0] lag, lag_n;  // cycles behind the ideal entry instant\n";
    for (const auto& [name, width] : widths_)
      out_ << "  reg signed " << range(width) << "v_" << name << ", v_" << name << "_n;\n";
    for (std::size_t t = 0; t < fsm_.timers.size(); ++t) {
      const auto& timer = fsm_.timers[t];
      const std::string id = "t" + std::to_string(t);
      const int owner = owner_of_timer(t);
      out_ << "\n  // " << timer.state << ": " << format_duration(timer.duration) << "\n";
      out_ << "  wire " << id << "_start = (state == " << state_names_[owner] << ") && first;\n";
      out_ << "  wire " << id << "_done;\n";
      out_ << "  hhls_timer #(.N(" << timer.parameter << "), .W(" << (timer.cycles >= (1ULL << 31) ? 64 : 32)
           << ")) u_" << id << " (.clk(clk), .rst(rst), .start(" << id << "_start), .skip(lag), .done("
           << id << "_done));\n";
    }
    out_ << "\n  assign state_o = state;\n\n" << kFunctions;

    out_ << "\n  always @* begin\n    state_n = state;\n    first_n = 1'b0;\n    lag_n = lag;\n";
    for (const auto& [name, width] : widths_) out_ << "    v_" << name << "_n = v_" << name << ";\n";
    for (const auto& e : model_.events) {
      if (e.direction == Direction::Input) {
        out_ << "    " << e.name << "_ack = 1'b0;\n";
      } else {
        out_ << "    " << e.name << "_req = 1'b0;\n";
        if (e.is_data()) out_ << "    " << e.name << "_data = 0;\n";
      }
    }
    for (const auto& m : fsm_.mccs) {
      out_ << "    mcc_" << m.name << "_start = 1'b0;\n";
      for (int k = 0; k < m.arguments; ++k) out_ << "    mcc_" << m.name << "_arg" << k << " = 32'sd0;\n";
    }
    out_ << "    case (state)\n";
    for (std::size_t i = 0; i < fsm_.states.size(); ++i) emit_state(static_cast<int>(i));
    out_ << "      default: begin\n        state_n = " << state_names_[fsm_.initial]
         << ";\n        first_n = 1'b1;\n        lag_n = 8'd0;\n      end\n    endcase\n  end\n\n";

    out_ << "  always @(posedge clk) begin\n    if (rst) begin\n      state <= " << state_names_[fsm_.initial]
         << ";\n      first <= 1'b1;\n      lag <= 8'd0;\n";
    for (const auto& [name, width] : widths_) out_ << "      v_" << name << " <= " << initial_of(name) << ";\n";
    out_ << "    end else begin\n      state <= state_n;\n      first <= first_n;\n      lag <= lag_n;\n";
    for (const auto& [name, width] : widths_) out_ << "      v_" << name << " <= v_" << name << "_n;\n";
    out_ << "    end\n  end\nendmodule\n";
    return out_.str();
  }

 private:
  int owner_of_timer(std::size_t t) const {
    for (std::size_t i = 0; i < fsm_.states.size(); ++i)
      if (fsm_.states[i].timer == t) return static_cast<int>(i);
    return 0;
  }

  std::string initial_of(const std::string& name) const {
    for (const auto& v : model_.variables)
      if (v.name == name) return literal(wrap_to_width(v.initial, v.width));
    return "32'sd0";
  }

  // Reads see the values already updated earlier in the cycle.
  std::string operand(const std::string& name) const {
    auto it = widths_.find(name);
    if (it != widths_.end())
      return it->second < 32 ? "s32(v_" + name + "_n)" : "v_" + name + "_n";
    for (const auto& c : model_.constants)
      if (c.name == name) return "C_" + name;
    fail("RTL: undeclared name '" + name + "'");
  }

  std::string expr(const Expr& e) const {
    switch (e.kind()) {
      case Expr::Kind::Literal:
        return literal(e.value());
      case Expr::Kind::Name:
        return operand(e.identifier());
      case Expr::Kind::Unary: {
        const std::string x = expr(e.lhs());
        switch (e.unary_op()) {
          case UnaryOp::Neg: return "(-" + x + ")";
          case UnaryOp::BitNot: return "(~" + x + ")";
          case UnaryOp::Not: return "b2i(" + x + " == 32'sd0)";
        }
        break;
      }
      case Expr::Kind::Binary: {
        const std::string a = expr(e.lhs());
        const std::string b = expr(e.rhs());
        switch (e.binary_op()) {
          case BinaryOp::Div: return "sdiv(" + a + ", " + b + ")";
          case BinaryOp::Mod: return "smod(" + a + ", " + b + ")";
          case BinaryOp::Shr: return "(" + a + " >>> " + b + ")";
          case BinaryOp::Lt: case BinaryOp::Le: case BinaryOp::Gt: case BinaryOp::Ge:
          case BinaryOp::Eq: case BinaryOp::Ne:
            return "b2i(" + a + " " + symbol(e.binary_op()) + " " + b + ")";
          case BinaryOp::And: return "b2i((" + a + " != 32'sd0) && (" + b + " != 32'sd0))";
          case BinaryOp::Or: return "b2i((" + a + " != 32'sd0) || (" + b + " != 32'sd0))";
          default: return "(" + a + " " + symbol(e.binary_op()) + " " + b + ")";
        }
      }
    }
    return "32'sd0";
  }

  void go(int target, const std::string& indent, const std::string& lag = "lag_inc(lag)") {
    out_ << indent << "state_n = " << state_names_[target] << ";\n" << indent << "first_n = 1'b1;\n"
         << indent << "lag_n = " << lag << ";\n";
  }

  void emit_state(int index) {
    const FsmState& st = fsm_.states[index];
    out_ << "      " << state_names_[index] << ": begin\n";
    if (!st.actions.empty() || st.invoke) {
      const bool gated = st.settles;  // settled states stay for more than one cycle
      const std::string in = gated ? "          " : "        ";
      if (gated) out_ << "        if (first) begin\n";
      for (const Action& action : st.actions) {
        if (const auto* n = std::get_if<NotifyAction>(&action.kind)) {
          out_ << in << n->event << "_req = 1'b1;\n";
        } else if (const auto* x = std::get_if<ExportAction>(&action.kind)) {
          out_ << in << x->event << "_req = 1'b1;\n" << in << x->event << "_data = " << expr(x->value) << ";\n";
        } else if (const auto* a = std::get_if<AssignAction>(&action.kind)) {
          out_ << in << "v_" << a->variable << "_n = " << expr(a->value) << ";\n";
        }
      }
      if (st.invoke) {
        out_ << in << "mcc_" << st.invoke->mcc << "_start = 1'b1;\n";
        for (std::size_t k = 0; k < st.invoke->arguments.size(); ++k)
          out_ << in << "mcc_" << st.invoke->mcc << "_arg" << k << " = " << operand(st.invoke->arguments[k])
               << ";\n";
      }
      if (gated) out_ << "        end\n";
    }

    const auto& rows = fsm_.rows[index];
    bool chained = false;
    std::set<std::string> imported;
    for (const FsmRow& row : rows) {
      const std::string open = chained ? "        end else if (" : "        if (";
      switch (row.condition) {
        case Condition::Always:
          go(row.next, "        ");
          break;
        case Condition::MccDone: {
          const InvokeAction& inv = *fsm_.states[index - 1].invoke;
          out_ << open << "mcc_" << inv.mcc << "_done) begin\n";
          for (std::size_t k = 0; k < inv.results.size(); ++k)
            out_ << "          v_" << inv.results[k] << "_n = mcc_" << inv.mcc << "_res" << k << ";\n";
          go(row.next, "          ");
          chained = true;
          break;
        }
        case Condition::Request: {
          if (!imported.insert(row.event).second) break;
          out_ << open << row.event << "_req) begin\n          " << row.event << "_ack = 1'b1;\n";
          if (widths_.count(row.event))
            out_ << "          v_" << row.event << "_n = " << row.event << "_data;\n";
          go(row.next, "          ", "IN_LAG_" + upper(row.event));
          chained = true;
          break;
        }
        case Condition::Guard:
          out_ << open << "first && (" << expr(row.guard) << " != 32'sd0)) begin\n";
          go(row.next, "          ");
          chained = true;
          break;
        case Condition::Delta:
          out_ << open << "first) begin\n";
          go(row.next, "          ");
          chained = true;
          break;
        case Condition::TimerDone:
          out_ << open << "t" << *st.timer << "_done) begin\n";
          go(row.next, "          ", "lag_rest(lag, " + fsm_.timers[*st.timer].parameter + ")");
          chained = true;
          break;
        case Condition::Hold:
          break;
      }
    }
    if (chained) out_ << "        end\n";
    if (st.settles) {
      for (const auto& e : model_.events)
        if (e.direction == Direction::Input && !imported.count(e.name))
          out_ << "        " << e.name << "_ack = " << e.name << "_req;  // dropped\n";
    }
    out_ << "      end\n";
  }

  const FsmIr& fsm_;
  const PsmComponent& model_;
  std::vector<std::string> state_names_;
  int state_bits_ = 1;
  std::map<std::string, int> widths_;
  std::ostringstream out_;
};

std::string wire(const std::string& instance, const std::string& event, const char* suffix) {
  return instance + "__" + event + suffix;
}

}  // namespace

std::string emit_rtl(const SystemIr& ir) {
  std::ostringstream out;
  out << "// " << ir.name << ": generated by hhls synth\n`timescale 1ns / 1ps\n\n" << kLibrary;

  std::set<std::string> emitted;
  for (const auto& inst : ir.instances) {
    if (!emitted.insert(inst.fsm.source.name).second) continue;
    ComponentEmitter emitter(inst.fsm);
    out << '\n' << emitter.emit();
  }

  // Top level: one clock per instance, external ports, MCC placeholders.
  out << "\nmodule " << ir.name << "_top (\n  input  wire rst";
  for (const auto& inst : ir.instances) out << ",\n  input  wire clk_" << inst.name;
  auto event_of = [&](const Endpoint& ep) -> const EventDecl* {
    int idx = ir.instance_index(ep.instance);
    return idx < 0 ? nullptr : ir.instances[idx].fsm.source.find_event(ep.event);
  };
  for (const auto& port : ir.ports) {
    const EventDecl* e = event_of(port.binding);
    const bool data = e && e->is_data();
    const std::string w = data ? range(*e->payload_width) : "";
    if (port.direction == Direction::Input) {
      out << ",\n  input  wire " << port.name << "_req";
      if (data) out << ",\n  input  wire signed " << w << port.name << "_data";
      out << ",\n  output wire " << port.name << "_ack";
    } else {
      out << ",\n  output wire " << port.name << "_req";
      if (data) out << ",\n  output wire signed " << w << port.name << "_data";
    }
  }
  for (const auto& inst : ir.instances) {
    for (const auto& m : inst.fsm.mccs) {
      const std::string p = "mcc_" + inst.name + "_" + m.name;
      out << ",\n  output wire " << p << "_start";
      for (int k = 0; k < m.arguments; ++k) out << ",\n  output wire signed [31:0] " << p << "_arg" << k;
      out << ",\n  input  wire " << p << "_done";
      for (int k = 0; k < m.results; ++k) out << ",\n  input  wire signed [31:0] " << p << "_res" << k;
    }
  }
  out << "\n);\n";

  for (const auto& inst : ir.instances) {
    for (const auto& e : inst.fsm.source.events) {
      out << "  wire " << wire(inst.name, e.name, "_req") << ";\n";
      if (e.is_data())
        out << "  wire signed " << range(*e.payload_width) << wire(inst.name, e.name, "_data") << ";\n";
      if (e.direction == Direction::Input) out << "  wire " << wire(inst.name, e.name, "_ack") << ";\n";
    }
  }

  for (std::size_t i = 0; i < ir.instances.size(); ++i) {
    const auto& inst = ir.instances[i];
    for (const auto& e : inst.fsm.source.events) {
      if (e.direction != Direction::Input) continue;
      const FsmLink* link = nullptr;
      for (const auto& l : ir.links)
        if (l.destination == static_cast<int>(i) && l.destination_event == e.name) link = &l;
      const Port* port = nullptr;
      for (const auto& p : ir.ports)
        if (p.direction == Direction::Input && p.binding.instance == inst.name && p.binding.event == e.name)
          port = &p;
      if (link) {
        const auto& src = ir.instances[link->source];
        const int w = e.payload_width.value_or(1);
        out << "  hhls_handshake #(.W(" << w << "), .CROSSING(" << (link->crossing ? 1 : 0) << ")) u_hs_"
            << inst.name << "_" << e.name << " (\n    .rst(rst),\n    .src_clk(clk_" << src.name
            << "),\n    .src_strobe(" << wire(src.name, link->source_event, "_req") << "),\n    .src_data("
            << (e.is_data() ? wire(src.name, link->source_event, "_data") : std::string("1'b0"))
            << "),\n    .dst_clk(clk_" << inst.name << "),\n    .req(" << wire(inst.name, e.name, "_req")
            << "),\n" << (e.is_data() ? "    .data(" + wire(inst.name, e.name, "_data") + "),\n" : std::string()) << "    .ack("
            << wire(inst.name, e.name, "_ack") << ")\n  );\n";
      } else if (port) {
        out << "  assign " << wire(inst.name, e.name, "_req") << " = " << port->name << "_req;\n";
        if (e.is_data()) out << "  assign " << wire(inst.name, e.name, "_data") << " = " << port->name << "_data;\n";
        out << "  assign " << port->name << "_ack = " << wire(inst.name, e.name, "_ack") << ";\n";
      } else {
        out << "  assign " << wire(inst.name, e.name, "_req") << " = 1'b0;\n";
        if (e.is_data()) out << "  assign " << wire(inst.name, e.name, "_data") << " = 0;\n";
      }
    }
  }
  for (const auto& p : ir.ports) {
    if (p.direction != Direction::Output) continue;
    const EventDecl* e = event_of(p.binding);
    out << "  assign " << p.name << "_req = " << wire(p.binding.instance, p.binding.event, "_req") << ";\n";
    if (e && e->is_data())
      out << "  assign " << p.name << "_data = " << wire(p.binding.instance, p.binding.event, "_data") << ";\n";
  }

  for (const auto& inst : ir.instances) {
    const FsmIr& fsm = inst.fsm;
    out << "  " << fsm.source.name << "_fsm #(\n    .CLK_HZ(" << inst.clock_hz << ")";
    for (const auto& t : fsm.timers) out << ",\n    ." << t.parameter << "(" << t.cycles << ")";
    for (const auto& l : ir.links)
      if (l.crossing && ir.instances[l.destination].name == inst.name)
        out << ",\n    .IN_LAG_" << upper(l.destination_event) << "(8'd" << 1 + kSyncCycles << ")";
    out << "\n  ) u_" << inst.name << " (\n    .clk(clk_" << inst.name << "),\n    .rst(rst)";
    for (const auto& e : fsm.source.events) {
      out << ",\n    ." << e.name << "_req(" << wire(inst.name, e.name, "_req") << ")";
      if (e.is_data()) out << ",\n    ." << e.name << "_data(" << wire(inst.name, e.name, "_data") << ")";
      if (e.direction == Direction::Input)
        out << ",\n    ." << e.name << "_ack(" << wire(inst.name, e.name, "_ack") << ")";
    }
    for (const auto& m : fsm.mccs) {
      const std::string p = "mcc_" + inst.name + "_" + m.name;
      out << ",\n    .mcc_" << m.name << "_start(" << p << "_start)";
      for (int k = 0; k < m.arguments; ++k)
        out << ",\n    .mcc_" << m.name << "_arg" << k << "(" << p << "_arg" << k << ")";
      out << ",\n    .mcc_" << m.name << "_done(" << p << "_done)";
      for (int k = 0; k < m.results; ++k)
        out << ",\n    .mcc_" << m.name << "_res" << k << "(" << p << "_res" << k << ")";
    }
    out << ",\n    .state_o()\n  );\n";
  }
  out << "endmodule\n";
  return out.str();
}

std::string fsm_report(const SystemIr& ir) {
  std::ostringstream out;
  out << "system " << ir.name << ": " << ir.instances.size() << " instances, " << ir.links.size()
      << " connections\n";
  for (const auto& inst : ir.instances) {
    const FsmIr& fsm = inst.fsm;
    out << "\ninstance " << inst.name << " (" << fsm.source.name << ") at " << format_mhz(inst.clock_hz)
        << " MHz\n";
    for (std::size_t i = 0; i < fsm.states.size(); ++i) {
      const FsmState& s = fsm.states[i];
      out << "  state " << i << ' ' << s.name << (static_cast<int>(i) == fsm.initial ? " (initial)" : "") << '\n';
      for (const FsmRow& row : fsm.rows[i]) {
        out << "    " << to_string(row.condition);
        if (row.condition == Condition::Request) out << ' ' << row.event;
        if (row.condition == Condition::Guard) out << ' ' << row.guard.render();
        out << " -> " << fsm.states[row.next].name << '\n';
      }
    }
    for (const auto& t : fsm.timers)
      out << "  timer " << t.parameter << " = " << t.cycles << " cycles (" << format_duration(t.duration)
          << ", error " << to_decimal(t.error) << " s)\n";
    for (const auto& m : fsm.mccs)
      out << "  mcc " << m.name << ": " << m.arguments << " arguments, " << m.results << " results\n";
  }
  if (!ir.links.empty()) out << '\n';
  for (const auto& l : ir.links)
    out << "link " << ir.instances[l.source].name << '.' << l.source_event << " -> "
        << ir.instances[l.destination].name << '.' << l.destination_event
        << (l.crossing ? " (clock crossing)" : "") << '\n';
  return out.str();
}

}  // namespace hhls
