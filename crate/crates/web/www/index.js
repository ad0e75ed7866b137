import init, { extremal, valueCurve, chainValue, presets } from "./pkg/polychain_web.js";

const $ = (id) => document.getElementById(id);
const SVG = "http://www.w3.org/2000/svg";

function indexName() {
  const name = $("index").value;
  return name === "randic" ? `randic(${$("gamma").value})` : name;
}

function show(id, text, isError = false) {
  const el = $(id);
  el.textContent = text;
  el.classList.toggle("err", isError);
}

function formatNumber(v) {
  return v.exact ? `${v.exact} (≈${v.decimal})` : `≈${v.decimal}`;
}

function svgEl(tag, attrs) {
  const el = document.createElementNS(SVG, tag);
  for (const [k, v] of Object.entries(attrs)) el.setAttribute(k, v);
  return el;
}

// Cells are lower-left corners with y pointing up; the chain grows right and down.
function drawChain(chain) {
  const xs = chain.cells.map((c) => c[0]);
  const ys = chain.cells.map((c) => c[1]);
  const minX = Math.min(...xs), maxX = Math.max(...xs) + 1;
  const minY = Math.min(...ys), maxY = Math.max(...ys) + 1;
  const w = maxX - minX, h = maxY - minY;
  const scale = Math.max(6, Math.min(24, 240 / Math.max(w, h)));
  const svg = svgEl("svg", {
    class: "cells",
    width: w * scale,
    height: h * scale,
    viewBox: `${minX} ${-maxY} ${w} ${h}`,
  });
  for (const [x, y] of chain.cells) {
    svg.appendChild(svgEl("rect", { x, y: -(y + 1), width: 1, height: 1 }));
  }
  const fig = document.createElement("figure");
  fig.appendChild(svg);
  const cap = document.createElement("figcaption");
  cap.textContent = chain.text === "" ? "(domino)" : chain.text;
  fig.appendChild(cap);
  return fig;
}

function runExtremal() {
  const box = $("ext-chains");
  box.replaceChildren();
  try {
    const r = JSON.parse(extremal(indexName(), Number($("ext-n").value), $("ext-min").checked));
    const lines = [
      `${r.objective} ${r.index}, n = ${r.n}: ${formatNumber(r.value)}`,
      `optimal chains: ${r.labeled_count}` +
        (r.distinct_up_to_reversal === null ? "" : `, ${r.distinct_up_to_reversal} up to reversal`),
    ];
    if (r.truncated) lines.push(`showing the first ${r.chains.length}`);
    if (r.tolerance_dependent) lines.push("float arithmetic: ties and counts depend on the tolerance");
    show("ext-out", lines.join("\n"));
    for (const c of r.chains) box.appendChild(drawChain(c));
  } catch (e) {
    show("ext-out", String(e.message ?? e), true);
  }
}

function runCurve() {
  const svg = $("curve");
  svg.replaceChildren();
  try {
    const r = JSON.parse(valueCurve(indexName(), Number($("curve-from").value), Number($("curve-to").value)));
    const pts = r.points;
    const W = svg.clientWidth || 800, H = svg.clientHeight || 260, pad = 36;
    const ns = pts.map((p) => p.n);
    const vals = pts.flatMap((p) => [p.max.approx, p.min.approx]);
    const x0 = Math.min(...ns), x1 = Math.max(...ns);
    const y0 = Math.min(...vals), y1 = Math.max(...vals);
    const sx = (n) => pad + ((n - x0) / Math.max(1, x1 - x0)) * (W - 2 * pad);
    const sy = (v) => H - pad - ((v - y0) / Math.max(1e-12, y1 - y0)) * (H - 2 * pad);
    svg.setAttribute("viewBox", `0 0 ${W} ${H}`);
    for (const [key, color] of [["max", "#25527c"], ["min", "#c0572b"]]) {
      const d = pts.map((p, i) => `${i ? "L" : "M"}${sx(p.n).toFixed(1)},${sy(p[key].approx).toFixed(1)}`).join("");
      svg.appendChild(svgEl("path", { d, fill: "none", stroke: color, "stroke-width": 1.5 }));
    }
    const label = (text, x, y, anchor) => {
      const t = svgEl("text", { x, y, "font-size": 11, "text-anchor": anchor });
      t.textContent = text;
      svg.appendChild(t);
    };
    label(`n = ${x0}`, pad, H - 10, "start");
    label(`n = ${x1}`, W - pad, H - 10, "end");
    label(y1.toPrecision(6), 4, pad, "start");
    label(y0.toPrecision(6), 4, H - pad, "start");
    const last = pts[pts.length - 1];
    show("curve-out", `${r.index}: blue maximum, orange minimum\nn = ${last.n}: M = ${formatNumber(last.max)}, m = ${formatNumber(last.min)}`);
  } catch (e) {
    show("curve-out", String(e.message ?? e), true);
  }
}

function runChain() {
  const box = $("links-chain");
  box.replaceChildren();
  try {
    const r = JSON.parse(chainValue(indexName(), $("links").value));
    show("links-out", `${r.index}, ${r.squares} squares, segments [${r.segments.join(", ")}]: ${formatNumber(r.value)}`);
    box.appendChild(drawChain(r));
  } catch (e) {
    show("links-out", String(e.message ?? e), true);
  }
}

await init();
for (const name of JSON.parse(presets())) {
  const opt = document.createElement("option");
  opt.value = opt.textContent = name;
  $("index").appendChild(opt);
}
$("ext-go").addEventListener("click", runExtremal);
$("curve-go").addEventListener("click", runCurve);
$("links-go").addEventListener("click", runChain);
runExtremal();
runCurve();
runChain();
