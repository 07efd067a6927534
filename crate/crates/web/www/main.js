import init, { thetaLandscape, expansionDemo, sweepDemo, identityNames } from "./pkg/ellidelta_web.js";

const $ = (id) => document.getElementById(id);

const NUM = String.raw`(?:\d+\.?\d*|\.\d+)(?:e[+-]?\d+)?`;
const FORMS = [
  [new RegExp(`^([+-]?${NUM})$`, "i"), (m) => [Number(m[1]), 0]],
  [new RegExp(`^([+-]?)(${NUM})?i$`, "i"), (m) => [0, Number(`${m[1]}${m[2] ?? 1}`)]],
  [new RegExp(`^([+-]?${NUM})([+-])(${NUM})?i$`, "i"), (m) => [Number(m[1]), Number(`${m[2]}${m[3] ?? 1}`)]],
];

// "re", "re+imi", "re-imi" or "imi", as on the command line.
function parseComplex(text) {
  const s = text.replace(/\s+/g, "");
  for (const [re, build] of FORMS) {
    const m = s.match(re);
    if (m) return build(m);
  }
  throw new Error(`cannot parse complex number "${text}"`);
}

function fmt(z) {
  const [re, im] = z;
  if (im === 0) return re.toPrecision(10);
  return `${re.toPrecision(10)}${im < 0 ? "-" : "+"}${Math.abs(im).toPrecision(10)}i`;
}

function guard(out, fn) {
  try {
    fn();
  } catch (e) {
    out.innerHTML = "";
    const div = document.createElement("div");
    div.className = "err";
    div.textContent = String(e.message ?? e);
    out.appendChild(div);
  }
}

function drawTheta() {
  guard($("th-msg"), () => {
    const [pr, pi] = parseComplex($("th-p").value);
    const r = Number($("th-r").value);
    const n = Number($("th-n").value);
    const t0 = performance.now();
    const grid = thetaLandscape(pr, pi, r, n);
    const ms = performance.now() - t0;
    const finite = grid.filter(Number.isFinite);
    const lo = Math.max(Math.min(...finite), -6);
    const hi = Math.max(...finite);
    const canvas = $("th-canvas");
    canvas.width = n;
    canvas.height = n;
    const ctx = canvas.getContext("2d");
    const img = ctx.createImageData(n, n);
    for (let i = 0; i < grid.length; i++) {
      const v = Number.isFinite(grid[i]) ? grid[i] : lo;
      const t = Math.min(1, Math.max(0, (v - lo) / (hi - lo || 1)));
      img.data[4 * i] = 255 * t;
      img.data[4 * i + 1] = 200 * t * t + 30 * (1 - t);
      img.data[4 * i + 2] = 90 + 120 * (1 - t);
      img.data[4 * i + 3] = 255;
    }
    ctx.putImageData(img, 0, 0);
    $("th-msg").textContent = `${n * n} evaluations in ${ms.toFixed(1)} ms; colour range ${lo.toFixed(1)} .. ${hi.toFixed(1)}`;
  });
}

function runExpansion() {
  const out = $("ex-out");
  guard(out, () => {
    const [a, b, c, q, p] = ["ex-a", "ex-b", "ex-c", "ex-q", "ex-p"].map((id) => parseComplex($(id).value));
    const n = Number($("ex-n").value);
    const demo = JSON.parse(expansionDemo(...a, ...b, ...c, n, ...q, ...p));
    let rows = "<tr><th>k</th><th>f_k (operator)</th><th>closed form</th><th>rel. difference</th></tr>";
    demo.coefficients.forEach((f, k) => {
      rows += `<tr><td>${k}</td><td>${fmt(f)}</td><td>${fmt(demo.closed_form[k])}</td><td>${demo.differences[k].toExponential(1)}</td></tr>`;
    });
    out.innerHTML = `<table>${rows}</table><p class="muted">reconstruction residual ${demo.residual.toExponential(2)}</p>`;
  });
}

function runSweep() {
  const out = $("sw-out");
  guard(out, () => {
    const t0 = performance.now();
    const demo = JSON.parse(sweepDemo($("sw-id").value, Number($("sw-seed").value), Number($("sw-count").value)));
    const ms = performance.now() - t0;
    const lines = demo.reports.map((r) => JSON.stringify(r)).join("\n");
    out.innerHTML =
      `<p>${demo.pass} pass, ${demo.fail} fail, ${demo.degenerate} degenerate; ` +
      `worst relative error ${demo.worst_rel_error.toExponential(2)} (${ms.toFixed(0)} ms)</p><pre></pre>`;
    out.querySelector("pre").textContent = lines;
  });
}

await init();
for (const name of identityNames()) {
  const opt = document.createElement("option");
  opt.value = opt.textContent = name;
  if (name === "12v11") opt.selected = true;
  $("sw-id").appendChild(opt);
}
$("th-go").addEventListener("click", drawTheta);
$("ex-go").addEventListener("click", runExpansion);
$("sw-go").addEventListener("click", runSweep);
drawTheta();
runExpansion();
