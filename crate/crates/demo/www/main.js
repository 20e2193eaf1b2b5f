import init, { hausdorff, split, modulus, catalog } from "./pkg/compacta_demo.js";

const $ = (id) => document.getElementById(id);
const num = (t) => t.split("/").map(Number).reduce((a, b) => a / b);

function show(out, f) {
  out.classList.remove("error");
  try {
    const v = JSON.parse(f());
    out.textContent = JSON.stringify(v, null, 2);
    return v;
  } catch (e) {
    out.classList.add("error");
    out.textContent = e.message ?? String(e);
    return null;
  }
}

function gridText(step, dim) {
  const n = Math.round(1 / num(step.trim()));
  if (!(n > 0 && n <= 200)) throw new Error("step must divide 1 into at most 200 parts");
  const xs = Array.from({ length: n + 1 }, (_, i) => `${i}/${n}`);
  return dim === 1 ? xs.join("\n") : xs.flatMap((x) => xs.map((y) => `${x} ${y}`)).join("\n");
}

function plot(v, center, eps) {
  const c = $("s-plot").getContext("2d");
  const size = c.canvas.width;
  c.clearRect(0, 0, size, size);
  if (!v) return;
  const pts = v.points.map((p) => [p[0], p[1] ?? 0]);
  const xs = pts.map((p) => p[0]).concat(center[0]);
  const ys = pts.map((p) => p[1]).concat(center[1] ?? 0);
  const lo = Math.min(...xs, ...ys) - 2 * eps;
  const hi = Math.max(...xs, ...ys) + 2 * eps;
  const sx = (x) => ((x - lo) / (hi - lo)) * size;
  const sy = (y) => size - ((y - lo) / (hi - lo)) * size;
  const cy = center[1] ?? 0;
  c.strokeStyle = "#999";
  for (const r of [eps, 2 * eps]) {
    c.strokeRect(sx(center[0] - r), sy(cy + r), sx(center[0] + r) - sx(center[0] - r), sy(cy - r) - sy(cy + r));
  }
  const kept = new Set((v.piece ?? []).map((p) => p.join(",")));
  for (const p of v.points) {
    c.fillStyle = kept.has(p.join(",")) ? "#c30" : "#888";
    c.beginPath();
    c.arc(sx(p[0]), sy(p[1] ?? 0), 3, 0, 2 * Math.PI);
    c.fill();
  }
}

function runSplit() {
  const center = $("s-center").value.trim().split(/[\s,]+/).map(num);
  const eps = $("s-eps").value;
  const v = show($("s-out"), () => split($("s-points").value, $("s-center").value, eps));
  plot(v, center, num(eps.trim()));
}

function runModulus() {
  const eps = `${$("m-eps").value}/40`;
  $("m-eps-val").textContent = eps;
  show($("m-out"), () => {
    const points = gridText($("m-step").value, 1);
    return modulus($("m-map").value, points, eps);
  });
}

await init();

for (const name of JSON.parse(catalog())) {
  $("m-map").add(new Option(name, name));
}
$("s-points").value = gridText("1/8", 2);

$("h-run").onclick = () => show($("h-out"), () => hausdorff($("h-a").value, $("h-b").value));
$("s-run").onclick = runSplit;
for (const id of ["m-map", "m-step", "m-eps"]) $(id).oninput = runModulus;

$("h-run").click();
runSplit();
runModulus();
