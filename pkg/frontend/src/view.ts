// Pure view layer: session state in, HTML strings and control
// descriptors out.  The cardinal rule is that clickable controls are
// derived from the service's legal_env_moves and nothing else, and
// the verdict string is shown exactly as the service sent it.

import type {
  Complexity,
  LegalMove,
  SessionState,
  TreeNode,
} from "./api.js";

export interface MoveControl {
  address: string;
  kind: "numeral" | "binary";
  options: string[]; // L/R for binary, empty for numeral (free entry)
}

export interface PositionView {
  treeHtml: string;
  transcriptHtml: string;
  statusHtml: string;
  metersHtml: string;
  notesHtml: string;
  controls: MoveControl[];
}

export function payloadBits(payload: number | string): number {
  if (typeof payload === "string") return 1; // L/R
  if (payload === 0) return 1;
  return payload.toString(2).length;
}

export function escapeHtml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function moveControls(moves: LegalMove[]): MoveControl[] {
  return moves.map((m) => ({
    address: m.address,
    kind: m.kind,
    options: m.kind === "binary" ? m.options ?? ["L", "R"] : [],
  }));
}

const CONNECTIVE_LABEL: Record<string, string> = {
  par_and: "∧",
  par_or: "∨",
  blind_all: "∀",
  blind_exists: "∃",
  choice_and: "⊓",
  choice_or: "⊔",
  choice_all: "⊓", // quantifier form, var appended below
  choice_exists: "⊔",
};

function ownerBadge(owner: "T" | "B"): string {
  return owner === "T"
    ? '<span class="badge machine">⊤</span>'
    : '<span class="badge env">⊥</span>';
}

export function renderTree(node: TreeNode, legal: Set<string>): string {
  switch (node.kind) {
    case "atom":
      return `<span class="atom">${escapeHtml(node.text ?? "")}</span>`;
    case "par_and":
    case "par_or": {
      const [l, r] = node.children ?? [];
      return (
        `<ul class="par"><li>${renderTree(l, legal)}</li>` +
        `<li class="op">${CONNECTIVE_LABEL[node.kind]}</li>` +
        `<li>${renderTree(r, legal)}</li></ul>`
      );
    }
    case "blind_all":
    case "blind_exists": {
      const [child] = node.children ?? [];
      return (
        `<span class="blind">${CONNECTIVE_LABEL[node.kind]}${escapeHtml(node.var ?? "")}</span> ` +
        renderTree(child, legal)
      );
    }
    case "choice_and":
    case "choice_or":
    case "choice_all":
    case "choice_exists": {
      const addr = node.address ?? "-";
      const active = node.owner === "B" && legal.has(addr);
      const quant = node.kind === "choice_all" || node.kind === "choice_exists";
      const label =
        CONNECTIVE_LABEL[node.kind] + (quant ? escapeHtml(node.var ?? "") : "");
      const head =
        `<span class="choice${active ? " active" : ""}"` +
        (active ? ` data-move-address="${escapeHtml(addr)}"` : "") +
        `>${ownerBadge(node.owner ?? "T")} ${label}</span>`;
      // unresolved subgames are unreachable until chosen: collapsed,
      // expandable on demand
      const branches = (node.collapsed ?? [])
        .map((t) => `<div class="branch">${escapeHtml(t)}</div>`)
        .join("");
      return (
        `${head}<details class="subgame"><summary>subgame</summary>` +
        `${branches}</details>`
      );
    }
  }
}

export function renderTranscript(transcript: string[]): string {
  const rows = transcript.map((line) => {
    const [who, addr, payload] = line.split(" ");
    const badge =
      who === "T"
        ? '<span class="badge machine">⊤</span>'
        : '<span class="badge env">⊥</span>';
    const numeric = /^[0-9]+$/.test(payload);
    const bits = payloadBits(numeric ? Number(payload) : payload);
    return (
      `<li>${badge} <code>${escapeHtml(addr)}</code> ` +
      `<strong>${escapeHtml(payload)}</strong> ` +
      `<span class="bits">${bits} bit${bits === 1 ? "" : "s"}</span></li>`
    );
  });
  return `<ol class="transcript">${rows.join("")}</ol>`;
}

export function renderStatus(state: SessionState): string {
  if (state.status === "finished") {
    // shown byte-for-byte as the service reported it
    return `<span class="status finished">${escapeHtml(state.verdict ?? "")}</span>`;
  }
  return '<span class="status ongoing">your move</span>';
}

export function renderMeters(c: Complexity): string {
  const amp = c.amplitude.map(([i, o]) => `(${i},${o})`).join(" ");
  return (
    `<dl class="meters">` +
    `<dt>time</dt><dd>${c.time}</dd>` +
    `<dt>space</dt><dd>${c.space}</dd>` +
    `<dt>amplitude</dt><dd>${escapeHtml(amp || "—")}</dd>` +
    `<dt>compositions</dt><dd>${c.compositions}</dd>` +
    `</dl>`
  );
}

export function renderNotes(notes: string[]): string {
  if (!notes.length) return "";
  const items = notes.map((n) => `<li>${escapeHtml(n)}</li>`).join("");
  return `<ul class="notes">${items}</ul>`;
}

export function buildPositionView(state: SessionState): PositionView {
  const legal = new Set(state.legal_env_moves.map((m) => m.address));
  return {
    treeHtml: renderTree(state.position_tree, legal),
    transcriptHtml: renderTranscript(state.transcript),
    statusHtml: renderStatus(state),
    metersHtml: renderMeters(state.complexity),
    notesHtml: renderNotes(state.notes),
    controls: moveControls(state.legal_env_moves),
  };
}

export function activeAddresses(view: PositionView): string[] {
  const out: string[] = [];
  const re = /data-move-address="([^"]*)"/g;
  let m: RegExpExecArray | null;
  while ((m = re.exec(view.treeHtml)) !== null) out.push(m[1]);
  return out;
}
