import init, { round_weight, grid_weights, run_oaa } from "./pkg/convex_approx_wasm_demo.js";

const $ = (id) => document.getElementById(id);

// simplex corners: λ1 bottom left, λ2 bottom right, λ3 top
function toXY(canvas, w) {
  const pad = 30, width = canvas.width - 2 * pad, height = canvas.height - 2 * pad;
  const corners = [[pad, pad + height], [pad + width, pad + height], [pad + width / 2, pad]];
  return [0, 1].map((axis) => w.reduce((s, l, i) => s + l * corners[i][axis], 0));
}

function drawSimplex(canvas) {
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  ctx.strokeStyle = "#444";
  ctx.beginPath();
  [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 0, 0]].forEach((w, i) => {
    const [x, y] = toXY(canvas, w);
    i === 0 ? ctx.moveTo(x, y) : ctx.lineTo(x, y);
  });
  ctx.stroke();
  ctx.fillStyle = "#444";
  ctx.font = "12px sans-serif";
  [["λ1", [1, 0, 0], -20, 15], ["λ2", [0, 1, 0], 5, 15], ["λ3", [0, 0, 1], -6, -8]].forEach(([t, w, dx, dy]) => {
    const [x, y] = toXY(canvas, w);
    ctx.fillText(t, x + dx, y + dy);
  });
  return ctx;
}

function dot(ctx, canvas, w, r, color) {
  const [x, y] = toXY(canvas, w);
  ctx.fillStyle = color;
  ctx.beginPath();
  ctx.arc(x, y, r, 0, 2 * Math.PI);
  ctx.fill();
}

function fail(el, e) {
  el.innerHTML = "";
  const span = document.createElement("span");
  span.className = "error";
  span.textContent = String(e);
  el.appendChild(span);
}

const fmt = (v) => "[" + v.map((x) => x.toPrecision(5)).join(", ") + "]";

function roundWeight() {
  const out = $("rw-out");
  try {
    const r = JSON.parse(round_weight($("rw-weight").value, $("rw-eps").value, Number($("rw-ub").value)));
    const lines = [
      `normalized input  ${fmt(r.input)}`,
      `c = ${r.c.toPrecision(5)}, lower bound ${r.lb.toPrecision(5)}`,
      `sorted order      ${r.order.join(" ")}`,
      ...r.steps.map((s) => `rescale k=${s.k}       ${fmt(s.state)}`),
      r.rounded ? `compact weight    ${fmt(r.compact)}` : "already in the compact region",
      `grid key          (${r.key.join(", ")})`,
      `grid weight       ${fmt(r.grid_weight)}`,
    ];
    out.textContent = lines.join("\n");
  } catch (e) {
    fail(out, e);
  }
}

function gridWeights() {
  const canvas = $("gw-canvas");
  const ctx = drawSimplex(canvas);
  try {
    const r = JSON.parse(grid_weights($("gw-eps").value, Number($("gw-ub").value), 50000));
    $("gw-info").textContent = `${r.points.length} grid weights, key range ${r.key_range}`;
    r.points.forEach((w) => dot(ctx, canvas, w, 1.5, "#1f77b4"));
  } catch (e) {
    fail($("gw-info"), e);
  }
}

const palette = ["#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00", "#a6a600", "#a65628", "#f781bf", "#999999"];

function runOaa() {
  const canvas = $("oa-canvas");
  const ctx = drawSimplex(canvas);
  const gen = $("oa-gen").value;
  const oracle = gen === "tsp" ? "christofides" : "greedy";
  try {
    const r = JSON.parse(run_oaa(gen, Number($("oa-n").value), BigInt($("oa-seed").value), $("oa-eps").value, oracle));
    const better = r.sense === "minimize" ? (a, b) => a < b : (a, b) => a > b;
    // color a lattice of weights by the solution that is best there
    const m = 90;
    for (let a = 0; a <= m; a++) {
      for (let b = 0; b <= m - a; b++) {
        const w = [a / m, b / m, (m - a - b) / m];
        let best = 0, bestValue = null;
        r.images.forEach((y, i) => {
          const v = y[0] * w[0] + y[1] * w[1] + y[2] * w[2];
          if (bestValue === null || better(v, bestValue)) { best = i; bestValue = v; }
        });
        dot(ctx, canvas, w, 2.6, palette[best % palette.length] + "66");
      }
    }
    r.called_weights.forEach((w) => dot(ctx, canvas, w, 2.2, "#000"));
    ctx.strokeStyle = "#000";
    r.vertices.forEach((v) => {
      const [x, y] = toXY(canvas, v.lambda);
      ctx.beginPath();
      ctx.moveTo(x - 4, y - 4); ctx.lineTo(x + 4, y + 4);
      ctx.moveTo(x - 4, y + 4); ctx.lineTo(x + 4, y - 4);
      ctx.stroke();
    });
    $("oa-info").textContent =
      `${r.images.length} solutions from ${r.oracle_calls} oracle calls (${oracle}); ` +
      `indicator ${r.indicator.toFixed(4)} against ${r.reference_count} exact points, guarantee ${r.guarantee.toFixed(4)}`;
  } catch (e) {
    fail($("oa-info"), e);
  }
}

await init();
$("rw-run").onclick = roundWeight;
$("gw-run").onclick = gridWeights;
$("oa-run").onclick = runOaa;
roundWeight();
gridWeights();
