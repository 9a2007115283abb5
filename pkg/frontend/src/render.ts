// DOM construction for the document pane and the score panel.  Everything
// is built with createTextNode, so no escaping can corrupt the text.

import { buildForest, admits, cssClasses, type HighlightNode } from "./highlight.js";
import type { Annotation, RepresentationInfo, ScoreReport } from "./types.js";

export function renderDocument(
  container: HTMLElement,
  text: string,
  annotations: Annotation[],
  rep: RepresentationInfo,
): void {
  const doc = container.ownerDocument;
  container.textContent = "";

  const emitRange = (
    parent: Node,
    nodes: HighlightNode[],
    from: number,
    to: number,
  ) => {
    let cursor = from;
    for (const node of nodes) {
      const [start, end] = node.annotation.span;
      if (start > cursor) parent.appendChild(doc.createTextNode(text.slice(cursor, start)));
      const span = doc.createElement("span");
      span.className = cssClasses(node.annotation).join(" ");
      span.dataset.annotationId = node.annotation.id;
      if (node.annotation.note) span.title = node.annotation.note;
      emitRange(span, node.children, start, end);
      parent.appendChild(span);
      cursor = end;
    }
    if (to > cursor) parent.appendChild(doc.createTextNode(text.slice(cursor, to)));
  };

  const admitted = annotations.filter((a) => admits(rep, a));
  emitRange(container, buildForest(admitted), 0, text.length);
}

export function renderScore(panel: HTMLElement, score: ScoreReport | null): void {
  const doc = panel.ownerDocument;
  panel.textContent = "";
  if (score === null) return;

  const tqi = doc.createElement("div");
  tqi.className = "tqi-value";
  tqi.textContent = String(score.tqi_display);
  panel.appendChild(tqi);

  const grade = doc.createElement("div");
  grade.className = "tqi-grade";
  grade.textContent = `${score.grade} (${score.scale})`;
  panel.appendChild(grade);

  const detail = doc.createElement("div");
  detail.className = "tqi-detail";
  detail.textContent = `${score.total_error_points} points / ${score.word_count} words`;
  panel.appendChild(detail);

  if (score.breakdown.length > 0) {
    const list = doc.createElement("ul");
    list.className = "tqi-breakdown";
    for (const entry of score.breakdown) {
      const item = doc.createElement("li");
      item.textContent =
        `${entry.category_id} ${entry.severity} ×${entry.count} = ${entry.points}`;
      list.appendChild(item);
    }
    panel.appendChild(list);
  }
}
