// Client-side highlight computation.  Toggling a representation re-renders
// from the annotation list already in memory; the text itself is never
// refetched and never modified.

import type { Annotation, RepresentationInfo } from "./types.js";

export function admits(rep: RepresentationInfo, ann: Annotation): boolean {
  if (rep.include_categories !== null && !rep.include_categories.includes(ann.category_id)) {
    return false;
  }
  if (rep.include_severities !== null && !rep.include_severities.includes(ann.severity)) {
    return false;
  }
  return true;
}

export function cssClasses(ann: Annotation): string[] {
  return ["mistake", `cat-${ann.category_id}`, `sev-${ann.severity}`];
}

export interface HighlightNode {
  annotation: Annotation;
  children: HighlightNode[];
}

/**
 * Containment forest over valid (non-partially-overlapping) annotations.
 * Sorted by (start asc, end desc, arrival order); with identical spans the
 * earlier annotation becomes the parent, matching the server's nesting.
 */
export function buildForest(annotations: Annotation[]): HighlightNode[] {
  const ordered = annotations
    .map((annotation, index) => ({ annotation, index }))
    .sort((a, b) =>
      a.annotation.span[0] - b.annotation.span[0] ||
      b.annotation.span[1] - a.annotation.span[1] ||
      a.index - b.index,
    );
  const roots: HighlightNode[] = [];
  const stack: HighlightNode[] = [];
  for (const { annotation } of ordered) {
    const node: HighlightNode = { annotation, children: [] };
    while (stack.length > 0) {
      const top = stack[stack.length - 1]!.annotation;
      if (top.span[0] <= annotation.span[0] && annotation.span[1] <= top.span[1]) break;
      stack.pop();
    }
    if (stack.length === 0) {
      roots.push(node);
    } else {
      stack[stack.length - 1]!.children.push(node);
    }
    stack.push(node);
  }
  return roots;
}

export interface Segment {
  text: string;
  // covering annotations, outermost first; empty for unannotated text
  stack: Annotation[];
}

/**
 * Flatten text plus admitted annotations into contiguous segments.
 * Invariant: the concatenated segment texts equal the input text exactly.
 */
export function segments(
  text: string,
  annotations: Annotation[],
  rep: RepresentationInfo,
): Segment[] {
  const admitted = annotations.filter((a) => admits(rep, a));
  const forest = buildForest(admitted);
  const out: Segment[] = [];

  const emit = (piece: string, stack: Annotation[]) => {
    if (piece.length > 0) out.push({ text: piece, stack: [...stack] });
  };

  const walk = (nodes: HighlightNode[], from: number, to: number, stack: Annotation[]) => {
    let cursor = from;
    for (const node of nodes) {
      const [start, end] = node.annotation.span;
      emit(text.slice(cursor, start), stack);
      stack.push(node.annotation);
      walk(node.children, start, end, stack);
      stack.pop();
      cursor = end;
    }
    emit(text.slice(cursor, to), stack);
  };

  walk(forest, 0, text.length, []);
  return out;
}

/** Number of distinct annotations visible under the representation. */
export function highlightCount(segs: Segment[]): number {
  const seen = new Set<string>();
  for (const seg of segs) {
    for (const ann of seg.stack) seen.add(ann.id);
  }
  return seen.size;
}

export function concatText(segs: Segment[]): string {
  return segs.map((s) => s.text).join("");
}
