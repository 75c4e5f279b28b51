import init, { scan, scan_at, prolong, realization, sample_field } from "./pkg/lievec_web.js";

const $ = (id) => document.getElementById(id);
const GRID = [-2, -1.5, -1, -0.5, 0, 0.5, 1, 1.5, 2];

function fraction(v) {
  return Number.isInteger(v) ? String(v) : `${v * 2}/2`;
}

function fieldNames(text) {
  return text
    .split(/[\n;]/)
    .map((s) => s.split("#")[0].trim())
    .filter((s) => s.includes("=") && !/^(chart|params)\s*:/.test(s))
    .map((s) => s.slice(0, s.indexOf("=")).trim());
}

// arrows scaled to a common length, colour by log magnitude
function drawArrows(canvas, data, box) {
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  ctx.clearRect(0, 0, w, h);
  const sx = (x) => ((x - box.x0) / (box.x1 - box.x0)) * w;
  const sy = (y) => h - ((y - box.y0) / (box.y1 - box.y0)) * h;
  ctx.strokeStyle = "#eee";
  ctx.beginPath();
  ctx.moveTo(sx(0), 0);
  ctx.lineTo(sx(0), h);
  ctx.moveTo(0, sy(0));
  ctx.lineTo(w, sy(0));
  ctx.stroke();
  const mags = [];
  for (let i = 0; i < data.length; i += 4) {
    const m = Math.hypot(data[i + 2], data[i + 3]);
    if (Number.isFinite(m) && m > 0) mags.push(Math.log(m));
  }
  const lo = Math.min(...mags), hi = Math.max(...mags);
  const n = Math.sqrt(data.length / 4);
  const len = (0.42 * w) / n;
  for (let i = 0; i < data.length; i += 4) {
    const [x, y, u, v] = [data[i], data[i + 1], data[i + 2], data[i + 3]];
    const m = Math.hypot(u, v);
    const px = sx(x), py = sy(y);
    if (!Number.isFinite(m)) {
      ctx.fillStyle = "#c33";
      ctx.fillRect(px - 2, py - 2, 4, 4);
      continue;
    }
    if (m === 0) {
      ctx.fillStyle = "#999";
      ctx.fillRect(px - 1, py - 1, 2, 2);
      continue;
    }
    const t = hi > lo ? (Math.log(m) - lo) / (hi - lo) : 0.5;
    ctx.strokeStyle = `hsl(${240 - 240 * t}, 70%, 40%)`;
    const dx = (u / m) * len, dy = -(v / m) * len;
    ctx.beginPath();
    ctx.moveTo(px - dx / 2, py - dy / 2);
    ctx.lineTo(px + dx / 2, py + dy / 2);
    const a = Math.atan2(dy, dx);
    ctx.lineTo(px + dx / 2 - 4 * Math.cos(a - 0.5), py + dy / 2 - 4 * Math.sin(a - 0.5));
    ctx.moveTo(px + dx / 2, py + dy / 2);
    ctx.lineTo(px + dx / 2 - 4 * Math.cos(a + 0.5), py + dy / 2 - 4 * Math.sin(a + 0.5));
    ctx.stroke();
  }
}

function plotInto(canvas, fields, name, box, n) {
  drawArrows(canvas, sample_field(fields, name, box.x0, box.x1, box.y0, box.y1, n), box);
}

function showScanAt(lambda, mu) {
  try {
    const r = JSON.parse(scan_at(lambda, mu));
    $("scan-detail").textContent =
      `lambda = ${r.lambda}, mu = ${r.mu}\n` +
      `Xa      = ${r.Xa}\nXb      = ${r.Xb}\n` +
      `W       = ${r.W}\n[W, Xa] = ${r.WXa}\n[W, Xb] = ${r.WXb}\n` +
      `closure dimension: ${r.closure ?? "> 12"}\n` +
      (r.solution ? "solution: W != 0, [W, Xa] = [W, Xb] = 0" : "not a solution");
    const text = `chart: x, y\nXa = ${r.Xa}\nXb = ${r.Xb}\n`;
    const box = { x0: -1.5, x1: 1.5, y0: -1.5, y1: 1.5 };
    plotInto($("scan-a"), text, "Xa", box, 13);
    plotInto($("scan-b"), text, "Xb", box, 13);
  } catch (e) {
    $("scan-detail").innerHTML = `<span class="err">${e.message ?? e}</span>`;
  }
}

function buildGrid() {
  const table = $("scan-grid");
  const head = document.createElement("tr");
  head.appendChild(document.createElement("th"));
  for (const l of GRID) {
    const th = document.createElement("th");
    th.textContent = l;
    head.appendChild(th);
  }
  table.appendChild(head);
  for (const m of GRID) {
    const tr = document.createElement("tr");
    const th = document.createElement("th");
    th.textContent = m;
    tr.appendChild(th);
    for (const l of GRID) {
      const td = document.createElement("td");
      const r = JSON.parse(scan_at(fraction(l), fraction(m)));
      if (r.solution) td.className = "solution";
      else if (r.W === "0") td.className = "abelian";
      td.textContent = r.closure ?? "";
      td.addEventListener("click", () => {
        for (const c of table.querySelectorAll("td.selected")) c.classList.remove("selected");
        td.classList.add("selected");
        $("lambda").value = fraction(l);
        $("mu").value = fraction(m);
        showScanAt(fraction(l), fraction(m));
      });
      tr.appendChild(td);
    }
    table.appendChild(tr);
  }
}

function runProlong() {
  try {
    $("prolong-out").textContent = prolong($("prolong-in").value, Number($("prolong-order").value));
  } catch (e) {
    $("prolong-out").innerHTML = `<span class="err">${e.message ?? e}</span>`;
  }
}

function refreshNames() {
  const sel = $("plot-name");
  const keep = sel.value;
  sel.innerHTML = "";
  for (const n of fieldNames($("plot-in").value)) {
    const o = document.createElement("option");
    o.textContent = n;
    sel.appendChild(o);
  }
  if ([...sel.options].some((o) => o.value === keep)) sel.value = keep;
}

function runPlot() {
  $("plot-err").textContent = "";
  const box = {
    x0: Number($("plot-x0").value), x1: Number($("plot-x1").value),
    y0: Number($("plot-y0").value), y1: Number($("plot-y1").value),
  };
  try {
    plotInto($("plot"), $("plot-in").value, $("plot-name").value, box, Math.min(60, Number($("plot-n").value)));
  } catch (e) {
    $("plot-err").textContent = e.message ?? e;
  }
}

await init();
const s = JSON.parse(scan());
$("scan-summary").textContent =
  `constraints:\n  ${s.constraints.join("\n  ")}\n` +
  `common zeros: ${s.candidates.map((p) => `(${p})`).join(" ")}\n` +
  `solutions (W != 0): ${s.solutions.map((p) => `(${p})`).join(" ")}`;
buildGrid();
showScanAt($("lambda").value, $("mu").value);
$("scan-go").addEventListener("click", () => showScanAt($("lambda").value, $("mu").value));
$("prolong-go").addEventListener("click", runProlong);
$("prolong-sl").addEventListener("click", () => {
  $("prolong-in").value = realization(4, 1);
  runProlong();
});
runProlong();
$("plot-in").addEventListener("input", refreshNames);
$("plot-go").addEventListener("click", runPlot);
refreshNames();
runPlot();
