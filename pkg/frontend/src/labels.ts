// Paint queued captions: node face labels, lane captions, the legend.
// The only DOM-dependent render code; everything else builds headless.
// Labels are canvas-textured planes glued to cube faces; far from the
// camera each labeled node swaps to a single camera-facing sprite so the
// text stays readable (readability over fidelity).  Lane and legend
// captions are sprites at any range.

import * as THREE from 'three'
import type { LanePayload } from './types.js'

// Each face: where the label plane sits, how it faces outward, and which
// parent scale axes stretch its local x/y (undone so text keeps shape on
// non-uniformly scaled cubes).
type Axis = 'x' | 'y' | 'z'
const FACE_TRANSFORMS: Record<
  string,
  { offset: THREE.Vector3; rotation: THREE.Euler; axes: [Axis, Axis] }
> = {
  front: { offset: new THREE.Vector3(0, 0, 0.51), rotation: new THREE.Euler(0, 0, 0), axes: ['x', 'y'] },
  back: { offset: new THREE.Vector3(0, 0, -0.51), rotation: new THREE.Euler(0, Math.PI, 0), axes: ['x', 'y'] },
  left: { offset: new THREE.Vector3(-0.51, 0, 0), rotation: new THREE.Euler(0, -Math.PI / 2, 0), axes: ['z', 'y'] },
  right: { offset: new THREE.Vector3(0.51, 0, 0), rotation: new THREE.Euler(0, Math.PI / 2, 0), axes: ['z', 'y'] },
  top: { offset: new THREE.Vector3(0, 0.51, 0), rotation: new THREE.Euler(-Math.PI / 2, 0, 0), axes: ['x', 'z'] },
  bottom: { offset: new THREE.Vector3(0, -0.51, 0), rotation: new THREE.Euler(Math.PI / 2, 0, 0), axes: ['x', 'z'] },
}

function textTexture(text: string): THREE.CanvasTexture {
  const canvas = document.createElement('canvas')
  const context = canvas.getContext('2d')!
  const font = '28px system-ui, sans-serif'
  context.font = font
  const lines = text.split('\n')
  const width = Math.max(...lines.map((l) => context.measureText(l).width), 1)
  canvas.width = Math.ceil(width) + 16
  canvas.height = 36 * lines.length + 8
  context.font = font
  context.fillStyle = 'rgba(16, 18, 24, 0.72)'
  context.fillRect(0, 0, canvas.width, canvas.height)
  context.fillStyle = '#e8eaed'
  context.textBaseline = 'top'
  lines.forEach((line, i) => context.fillText(line, 8, 6 + 36 * i))
  const texture = new THREE.CanvasTexture(canvas)
  texture.colorSpace = THREE.SRGBColorSpace
  return texture
}

function facePlane(text: string): THREE.Mesh {
  const texture = textTexture(text)
  const aspect = texture.image.width / texture.image.height
  const height = 0.28
  const plane = new THREE.Mesh(
    new THREE.PlaneGeometry(Math.min(aspect * height, 0.96), height),
    new THREE.MeshBasicMaterial({ map: texture, transparent: true }),
  )
  return plane
}

function captionSprite(text: string, scale = 0.6): THREE.Sprite {
  const texture = textTexture(text)
  const aspect = texture.image.width / texture.image.height
  const sprite = new THREE.Sprite(
    new THREE.SpriteMaterial({ map: texture, transparent: true, depthTest: false }),
  )
  sprite.scale.set(scale * aspect, scale, 1)
  return sprite
}

/** Beyond this camera distance face text swaps to the sprite fallback. */
export const FALLBACK_DISTANCE = 16

/** Attach painted text to every object queued by the scene builder. */
export function paintCaptions(captioned: THREE.Object3D[]): void {
  for (const object of captioned) {
    const labels = object.userData.labels as Record<string, string> | undefined
    if (labels) {
      for (const [face, text] of Object.entries(labels)) {
        const transform = FACE_TRANSFORMS[face]
        if (!transform || !text) continue
        const plane = facePlane(text)
        plane.position.copy(transform.offset)
        plane.setRotationFromEuler(transform.rotation)
        plane.scale.set(
          1 / object.scale[transform.axes[0]],
          1 / object.scale[transform.axes[1]],
          1,
        )
        plane.userData.faceLabel = true
        object.add(plane)
      }
      const fallbackText = labels.front ?? Object.values(labels)[0]
      if (fallbackText) {
        const sprite = captionSprite(fallbackText, 0.5)
        sprite.scale.x /= object.scale.x
        sprite.scale.y /= object.scale.y
        sprite.position.set(0, 0.5 + 0.45 / object.scale.y, 0)
        sprite.visible = false
        sprite.userData.labelFallback = true
        object.add(sprite)
      }
      continue
    }
    const caption = object.userData.caption as string | undefined
    if (!caption) continue
    const sprite = captionSprite(caption)
    const lane = object.userData.lane as LanePayload | undefined
    if (lane) {
      // Pin the caption at the lane's near-left corner, in the plane's
      // local frame (the builder already rotated/positioned the plane).
      const geometry = (object as THREE.Mesh).geometry as THREE.PlaneGeometry
      sprite.position.set(-geometry.parameters.width / 2 + 0.4, 0.3, 0.05)
    } else {
      sprite.position.set(0, 1.0, 0)
    }
    object.add(sprite)
  }
}

/**
 * Per-frame visibility toggle: near nodes show face planes, far nodes
 * show the camera-facing sprite.  Reads local positions; labeled nodes
 * are direct children of the scene root, which sits at the origin.
 */
export function updateLabelDistance(
  captioned: THREE.Object3D[],
  cameraPosition: THREE.Vector3,
): void {
  for (const object of captioned) {
    if (!object.userData.labels) continue
    const far = object.position.distanceTo(cameraPosition) > FALLBACK_DISTANCE
    for (const child of object.children) {
      if (child.userData.faceLabel) child.visible = !far
      if (child.userData.labelFallback) child.visible = far
    }
  }
}
